#include "whkit/generators.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "whkit/error.hpp"

namespace whkit {

namespace {

constexpr double kTurnStart = 1.5 * std::numbers::pi;
constexpr double kTurnEnd = 4.5 * std::numbers::pi;
constexpr double kWidth = 21.0;

// Arclength of the planar spiral (t cos t, t sin t) from 0 to t.
double spiral_arclength(double t) { return 0.5 * (t * std::sqrt(1.0 + t * t) + std::asinh(t)); }

double param_to_turn(double u) { return kTurnStart + u * (kTurnEnd - kTurnStart); }

// Uniform and Gaussian draws built directly on the engine's output so that
// samples do not depend on the standard library's distribution algorithms.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0;
    do u = uniform();
    while (u <= 0.0);
    const double radius = std::sqrt(-2.0 * std::log(u));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::vector<double> parse_numbers(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ParseError(what, 0, "non-numeric value '" + item + "'");
    }
    if (used != item.size()) throw ParseError(what, 0, "non-numeric value '" + item + "'");
    values.push_back(v);
  }
  if (values.size() != expected)
    throw ParseError(what, 0, "expected " + std::to_string(expected) + " comma-separated values");
  return values;
}

bool inside(const ParamRect& r, double u, double v) { return u >= r.u0 && u <= r.u1 && v >= r.v0 && v <= r.v1; }

double rect_distance(double x, double y, double x0, double y0, double x1, double y1) {
  const double dx = std::max({x0 - x, 0.0, x - x1});
  const double dy = std::max({y0 - y, 0.0, y - y1});
  return std::hypot(dx, dy);
}

}  // namespace

RollDefect RollDefect::parse(const std::string& text) {
  if (text == "none") return {};
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("defect", 0, "expected none, hole:u0,v0,u1,v1 or cut:u0,v0,u1,v1");
  RollDefect d;
  const std::string kind = text.substr(0, colon);
  if (kind == "hole")
    d.kind = Kind::hole;
  else if (kind == "cut")
    d.kind = Kind::cut;
  else
    throw ParseError("defect", 0, "unknown defect kind '" + kind + "'");
  const auto v = parse_numbers(text.substr(colon + 1), 4, "defect");
  d.rect = ParamRect{v[0], v[1], v[2], v[3]};
  return d;
}

void SwissRollSpec::validate() const {
  if (n < 10) throw ContractError("swiss roll needs at least 10 samples");
  if (!(stretch > 0.0) || !std::isfinite(stretch)) throw ContractError("stretch must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ContractError("noise sigma must be >= 0");
  if (defect.kind == RollDefect::Kind::none) return;
  const ParamRect& r = defect.rect;
  if (!(0.0 <= r.u0 && r.u0 < r.u1 && r.u1 <= 1.0 && 0.0 <= r.v0 && r.v0 < r.v1 && r.v1 <= 1.0))
    throw ContractError("defect rectangle must satisfy 0 <= u0 < u1 <= 1 and 0 <= v0 < v1 <= 1");
  if (r.u0 == 0.0 && r.u1 == 1.0 && r.v0 == 0.0 && r.v1 == 1.0) throw ContractError("defect covers the whole domain");
  const bool touches_rim = r.u0 == 0.0 || r.u1 == 1.0 || r.v0 == 0.0 || r.v1 == 1.0;
  if (defect.kind == RollDefect::Kind::hole && touches_rim) throw ContractError("a hole must lie strictly inside the domain");
  if (defect.kind == RollDefect::Kind::cut && !touches_rim) throw ContractError("a cut must touch the domain rim");
}

SwissRoll gen_swiss_roll(const SwissRollSpec& spec) {
  spec.validate();
  const bool has_defect = spec.defect.kind != RollDefect::Kind::none;
  const ParamRect& rect = spec.defect.rect;

  const double s0 = spiral_arclength(kTurnStart);
  const double s1 = spiral_arclength(kTurnEnd);
  const double width = spec.stretch * kWidth;
  double area = (s1 - s0) * width;
  double hole_x0 = 0, hole_x1 = 0, hole_y0 = 0, hole_y1 = 0;
  if (has_defect) {
    hole_x0 = spiral_arclength(param_to_turn(rect.u0));
    hole_x1 = spiral_arclength(param_to_turn(rect.u1));
    hole_y0 = width * rect.v0;
    hole_y1 = width * rect.v1;
    area -= (hole_x1 - hole_x0) * (hole_y1 - hole_y0);
  }
  const double spacing = std::sqrt(area / static_cast<double>(spec.n));

  Sampler sampler(spec.seed);
  SwissRoll out;
  out.cloud.points.reserve(spec.n);
  out.cloud.parameterization.emplace();
  out.cloud.parameterization->reserve(spec.n);
  std::vector<std::size_t> boundary;
  while (out.cloud.points.size() < spec.n) {
    const double u = sampler.uniform();
    const double v = sampler.uniform();
    if (has_defect && inside(rect, u, v)) continue;
    const double t = param_to_turn(u);
    const double w = kWidth * v;
    Vec3 p(t * std::cos(t), spec.stretch * w, t * std::sin(t));
    if (spec.noise_sigma > 0.0)
      for (int c = 0; c < 3; ++c) p[c] += spec.noise_sigma * sampler.gaussian();
    const Vec2 truth(spiral_arclength(t), spec.stretch * w);

    double rim = std::min({truth.x() - s0, s1 - truth.x(), truth.y(), width - truth.y()});
    if (has_defect) rim = std::min(rim, rect_distance(truth.x(), truth.y(), hole_x0, hole_y0, hole_x1, hole_y1));
    if (rim < spacing) boundary.push_back(out.cloud.points.size());

    out.cloud.points.push_back(p);
    out.cloud.parameterization->push_back(truth);
  }
  out.boundary_hint = BoundarySet(std::move(boundary));
  return out;
}

GridDefect GridDefect::parse(const std::string& text) {
  const auto v = parse_numbers(text, 4, "grid defect");
  GridDefect d;
  std::size_t* fields[] = {&d.row0, &d.col0, &d.row1, &d.col1};
  for (int i = 0; i < 4; ++i) {
    if (v[i] < 0.0 || v[i] != std::floor(v[i])) throw ParseError("grid defect", 0, "indices must be non-negative integers");
    *fields[i] = static_cast<std::size_t>(v[i]);
  }
  return d;
}

Grid gen_grid_with_defect(std::size_t rows, std::size_t cols, double spacing, std::optional<GridDefect> defect) {
  if (rows < 3 || cols < 3) throw ContractError("grid needs at least 3 rows and 3 columns");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw ContractError("grid spacing must be positive");
  const auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };

  std::vector<bool> removed(rows * cols, false);
  if (defect) {
    const GridDefect& d = *defect;
    if (d.row0 > d.row1 || d.col0 > d.col1 || d.row1 >= rows || d.col1 >= cols)
      throw ContractError("grid defect must be an inclusive block inside the grid");
    for (std::size_t r = d.row0; r <= d.row1; ++r)
      for (std::size_t c = d.col0; c <= d.col1; ++c) removed[id(r, c)] = true;
  }

  std::vector<Face> faces;
  for (std::size_t r = 0; r + 1 < rows; ++r) {
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      const Face lower{id(r, c), id(r, c + 1), id(r + 1, c + 1)};
      const Face upper{id(r, c), id(r + 1, c + 1), id(r + 1, c)};
      for (const Face& f : {lower, upper})
        if (!removed[f[0]] && !removed[f[1]] && !removed[f[2]]) faces.push_back(f);
    }
  }
  std::vector<bool> used(rows * cols, false);
  for (const Face& f : faces)
    for (std::size_t v : f) used[v] = true;

  Grid out;
  std::vector<std::size_t> local(rows * cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t v = id(r, c);
      if (!used[v]) continue;
      local[v] = out.kept.size();
      out.kept.push_back(v);
      out.mesh.vertices.emplace_back(static_cast<double>(c) * spacing, static_cast<double>(r) * spacing, 0.0);
    }
  }
  if (out.kept.empty()) throw ContractError("grid defect removes every face");
  for (const Face& f : faces) out.mesh.faces.push_back(Face{local[f[0]], local[f[1]], local[f[2]]});

  if (connected_components(mesh_graph(out.mesh).adjacency()).count != 1)
    throw ContractError("grid defect disconnects the grid");
  return out;
}

}  // namespace whkit
