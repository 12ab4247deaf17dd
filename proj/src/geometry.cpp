#include "whkit/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

#include "whkit/error.hpp"

namespace whkit {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

template <typename T>
bool parse_number(std::string_view token, T& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if constexpr (std::is_floating_point_v<T>) {
    if (first != last && *first == '+') ++first;
  }
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Reads the next line that is neither blank nor a '#' comment.
class LineReader {
public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::vector<std::string_view>& tokens) {
    while (std::getline(in_, line_)) {
      ++number_;
      tokens = split_ws(line_);
      if (!tokens.empty() && tokens.front().front() != '#') return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, number_, what); }
  std::size_t number() const { return number_; }

private:
  std::istream& in_;
  std::string source_;
  std::string line_;
  std::size_t number_ = 0;
};

Vec3 parse_point(LineReader& reader, const std::vector<std::string_view>& tokens) {
  if (tokens.size() != 3) reader.fail("expected 3 coordinates, got " + std::to_string(tokens.size()));
  Vec3 p;
  for (int c = 0; c < 3; ++c) {
    if (!parse_number(tokens[c], p[c])) reader.fail("non-numeric coordinate '" + std::string(tokens[c]) + "'");
    if (!std::isfinite(p[c])) reader.fail("non-finite coordinate");
  }
  return p;
}

std::uint64_t edge_key(std::size_t a, std::size_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace

void TriangleMesh::validate() const {
  for (std::size_t i = 0; i < vertices.size(); ++i)
    if (!vertices[i].allFinite()) throw ContractError("vertex " + std::to_string(i) + " has non-finite coordinates");
  for (std::size_t f = 0; f < faces.size(); ++f) {
    const Face& face = faces[f];
    for (std::size_t idx : face)
      if (idx >= vertices.size()) throw ContractError("face " + std::to_string(f) + " index out of range");
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
      throw ContractError("face " + std::to_string(f) + " is degenerate");
  }
}

double TriangleMesh::total_area() const {
  double total = 0.0;
  for (const Face& f : faces)
    total += 0.5 * (vertices[f[1]] - vertices[f[0]]).cross(vertices[f[2]] - vertices[f[0]]).norm();
  return total;
}

void PointCloud::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i)
    if (!points[i].allFinite()) throw ContractError("point " + std::to_string(i) + " has non-finite coordinates");
  if (parameterization && parameterization->size() != points.size())
    throw ContractError("parameterization length differs from point count");
}

BoundarySet::BoundarySet(std::vector<std::size_t> sorted_indices) : indices_(std::move(sorted_indices)) {
  for (std::size_t i = 1; i < indices_.size(); ++i)
    if (indices_[i] <= indices_[i - 1]) throw ContractError("boundary indices must be strictly increasing");
}

BoundarySet BoundarySet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return BoundarySet(std::move(indices));
}

bool BoundarySet::contains(std::size_t v) const { return std::binary_search(indices_.begin(), indices_.end(), v); }

void BoundarySet::check_range(std::size_t vertex_count) const {
  if (!indices_.empty() && indices_.back() >= vertex_count)
    throw ContractError("boundary index " + std::to_string(indices_.back()) + " out of range for " +
                        std::to_string(vertex_count) + " vertices");
}

WeightedGraph::WeightedGraph(std::size_t vertex_count, std::span<const Edge> edges)
    : offsets_(vertex_count + 1, 0) {
  for (const Edge& e : edges) {
    if (e.u >= vertex_count || e.v >= vertex_count) throw ContractError("edge endpoint out of range");
    ++offsets_[e.u + 1];
    ++offsets_[e.v + 1];
  }
  std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
  arcs_.resize(offsets_.back());
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges) {
    arcs_[cursor[e.u]++] = Arc{static_cast<std::uint32_t>(e.v), e.weight};
    arcs_[cursor[e.v]++] = Arc{static_cast<std::uint32_t>(e.u), e.weight};
  }
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (std::size_t u = 0; u < vertex_count(); ++u)
    for (const Arc& a : neighbors(u))
      if (u < a.target) out.push_back(Edge{u, a.target, a.weight});
  std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  return out;
}

SurfaceGraph::SurfaceGraph(std::vector<Vec3> coords, std::span<const std::pair<std::size_t, std::size_t>> pairs)
    : coords_(std::move(coords)) {
  std::vector<std::uint64_t> keys;
  keys.reserve(pairs.size());
  for (auto [a, b] : pairs) {
    if (a >= coords_.size() || b >= coords_.size()) throw ContractError("edge endpoint out of range");
    if (a != b) keys.push_back(edge_key(a, b));
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<Edge> edges;
  edges.reserve(keys.size());
  for (std::uint64_t key : keys) {
    const std::size_t u = key >> 32;
    const std::size_t v = key & 0xffffffffu;
    const double w = (coords_[u] - coords_[v]).norm();
    if (!(w > 0.0)) throw ContractError("coincident vertices " + std::to_string(u) + " and " + std::to_string(v));
    edges.push_back(Edge{u, v, w});
  }
  adjacency_ = WeightedGraph(coords_.size(), edges);
}

Components connected_components(const WeightedGraph& graph) {
  const std::size_t n = graph.vertex_count();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  Components out{std::vector<std::size_t>(n, unset), 0};
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < n; ++seed) {
    if (out.label[seed] != unset) continue;
    out.label[seed] = out.count;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (const Arc& a : graph.neighbors(v)) {
        if (out.label[a.target] == unset) {
          out.label[a.target] = out.count;
          stack.push_back(a.target);
        }
      }
    }
    ++out.count;
  }
  return out;
}

TriangleMesh parse_off(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::string_view> tokens;
  if (!reader.next(tokens) || tokens.size() != 1 || tokens[0] != "OFF") reader.fail("expected 'OFF' header");
  if (!reader.next(tokens) || tokens.size() != 3) reader.fail("expected '<nv> <nf> <ne>'");
  std::size_t nv = 0, nf = 0, ne = 0;
  if (!parse_number(tokens[0], nv) || !parse_number(tokens[1], nf) || !parse_number(tokens[2], ne))
    reader.fail("malformed element counts");

  TriangleMesh mesh;
  mesh.vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    if (!reader.next(tokens)) reader.fail("unexpected end of file in vertex block");
    mesh.vertices.push_back(parse_point(reader, tokens));
  }
  mesh.faces.reserve(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    if (!reader.next(tokens)) reader.fail("unexpected end of file in face block");
    std::size_t arity = 0;
    if (!parse_number(tokens[0], arity)) reader.fail("malformed face arity");
    if (arity != 3) reader.fail("non-triangle face with " + std::to_string(arity) + " vertices");
    if (tokens.size() != 4) reader.fail("face line must be '3 i j k'");
    Face face;
    for (int c = 0; c < 3; ++c) {
      if (!parse_number(tokens[c + 1], face[c])) reader.fail("malformed face index");
      if (face[c] >= nv) reader.fail("face index " + std::to_string(face[c]) + " out of range");
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2]) reader.fail("degenerate face");
    mesh.faces.push_back(face);
  }
  if (reader.next(tokens)) reader.fail("trailing content after face block");
  return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return parse_off(in, path.string());
}

void save_off(const std::filesystem::path& path, const TriangleMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n" << std::setprecision(17);
  for (const Vec3& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const Face& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

PointCloud parse_xyz(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  PointCloud cloud;
  std::vector<std::string_view> tokens;
  while (reader.next(tokens)) cloud.points.push_back(parse_point(reader, tokens));
  return cloud;
}

PointCloud load_pointcloud(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return parse_xyz(in, path.string());
}

void save_xyz(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out << std::setprecision(17);
  for (const Vec3& p : cloud.points) out << p.x() << ' ' << p.y() << ' ' << p.z() << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

BoundarySet parse_boundary(std::istream& in, std::size_t vertex_count, const std::string& source) {
  LineReader reader(in, source);
  std::vector<std::size_t> indices;
  std::vector<std::string_view> tokens;
  while (reader.next(tokens)) {
    std::size_t v = 0;
    if (tokens.size() != 1 || !parse_number(tokens[0], v)) reader.fail("expected one vertex index per line");
    if (v >= vertex_count) reader.fail("vertex index " + std::to_string(v) + " out of range");
    indices.push_back(v);
  }
  return BoundarySet::from_unsorted(std::move(indices));
}

BoundarySet load_boundary(const std::filesystem::path& path, std::size_t vertex_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path.string());
  return parse_boundary(in, vertex_count, path.string());
}

void save_boundary(const std::filesystem::path& path, const BoundarySet& boundary) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  for (std::size_t v : boundary) out << v << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

BoundarySet extract_boundary(const TriangleMesh& mesh) {
  std::map<std::uint64_t, int> incidence;
  for (const Face& f : mesh.faces)
    for (int c = 0; c < 3; ++c) ++incidence[edge_key(f[c], f[(c + 1) % 3])];
  std::vector<std::size_t> indices;
  for (auto [key, count] : incidence) {
    if (count != 1) continue;
    indices.push_back(key >> 32);
    indices.push_back(key & 0xffffffffu);
  }
  return BoundarySet::from_unsorted(std::move(indices));
}

VertexAreas vertex_areas(const TriangleMesh& mesh) {
  VertexAreas out{Vector::Zero(static_cast<Eigen::Index>(mesh.vertex_count()))};
  for (const Face& f : mesh.faces) {
    const Vec3& a = mesh.vertices[f[0]];
    const double third = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a).norm() / 6.0;
    for (std::size_t v : f) out.values[v] += third;
  }
  for (Eigen::Index i = 0; i < out.values.size(); ++i)
    if (!(out.values[i] > 0.0)) throw ContractError("vertex " + std::to_string(i) + " has zero area (isolated or in degenerate faces only)");
  return out;
}

SurfaceGraph mesh_graph(const TriangleMesh& mesh) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(3 * mesh.faces.size());
  for (const Face& f : mesh.faces)
    for (int c = 0; c < 3; ++c) pairs.emplace_back(f[c], f[(c + 1) % 3]);
  return SurfaceGraph(mesh.vertices, pairs);
}

SurfaceGraph knn_graph(const PointCloud& cloud, std::size_t k) {
  const std::size_t n = cloud.points.size();
  if (k == 0 || k >= n) throw ContractError("knn_graph requires 0 < k < point count");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * k);
  std::vector<std::pair<double, std::size_t>> candidates(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t c = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) candidates[c++] = {(cloud.points[i] - cloud.points[j]).squaredNorm(), j};
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(k), candidates.end());
    for (std::size_t r = 0; r < k; ++r) pairs.emplace_back(i, candidates[r].second);
  }
  return SurfaceGraph(cloud.points, pairs);
}

}  // namespace whkit
