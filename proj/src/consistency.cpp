#include "whkit/consistency.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "whkit/error.hpp"

namespace whkit {

PartialSelection::PartialSelection(std::vector<std::size_t> kept) : kept_(std::move(kept)) {
  if (kept_.empty()) throw ContractError("partial selection must keep at least one vertex");
  for (std::size_t i = 1; i < kept_.size(); ++i)
    if (kept_[i] <= kept_[i - 1]) throw ContractError("partial selection must be strictly increasing");
}

PartialSelection PartialSelection::complement(std::size_t vertex_count, std::vector<std::size_t> removed) {
  std::vector<bool> drop(vertex_count, false);
  for (std::size_t v : removed) {
    if (v >= vertex_count) throw ContractError("removed vertex out of range");
    drop[v] = true;
  }
  std::vector<std::size_t> kept;
  for (std::size_t v = 0; v < vertex_count; ++v)
    if (!drop[v]) kept.push_back(v);
  return PartialSelection(std::move(kept));
}

PartialSurface induce_partial(const SurfaceGraph& full, const PartialSelection& selection) {
  const std::size_t n = full.vertex_count();
  if (selection.kept().back() >= n) throw ContractError("selection index out of range");
  constexpr std::size_t removed = static_cast<std::size_t>(-1);
  std::vector<std::size_t> local(n, removed);
  for (std::size_t i = 0; i < selection.size(); ++i) local[selection.kept()[i]] = i;

  std::vector<Vec3> coords;
  coords.reserve(selection.size());
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> boundary;
  for (std::size_t i = 0; i < selection.size(); ++i) {
    const std::size_t v = selection.kept()[i];
    coords.push_back(full.coords()[v]);
    bool touches_removed = false;
    for (const Arc& a : full.neighbors(v)) {
      if (local[a.target] == removed)
        touches_removed = true;
      else if (i < local[a.target])
        pairs.emplace_back(i, local[a.target]);
    }
    if (touches_removed) boundary.push_back(i);
  }

  PartialSurface out{SurfaceGraph(std::move(coords), pairs), BoundarySet(std::move(boundary))};
  const Components comps = connected_components(out.graph.adjacency());
  if (comps.count > 1) {
    std::vector<std::size_t> sizes(comps.count, 0), first(comps.count, 0);
    for (std::size_t i = comps.label.size(); i-- > 0;) {
      ++sizes[comps.label[i]];
      first[comps.label[i]] = selection.kept()[i];
    }
    std::ostringstream msg;
    msg << "induced partial surface is disconnected into " << comps.count << " components:";
    for (std::size_t c = 0; c < comps.count; ++c)
      msg << " [" << sizes[c] << " vertices, first full index " << first[c] << "]";
    throw ContractError(msg.str());
  }
  return out;
}

DistanceMatrix restrict_distances(const DistanceMatrix& full, const PartialSelection& selection) {
  const auto& kept = selection.kept();
  if (kept.back() >= full.size()) throw ContractError("selection index out of range");
  Matrix d(kept.size(), kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (std::size_t j = 0; j < kept.size(); ++j) d(i, j) = full(kept[i], kept[j]);
  return DistanceMatrix(std::move(d));
}

Matrix consistent_pairs(const DistanceMatrix& full_restricted, const DistanceMatrix& partial, double tol) {
  const std::size_t n = partial.size();
  if (full_restricted.size() != n) throw ContractError("distance matrices must have the same size");
  if (!(tol >= 0.0)) throw ContractError("tolerance must be non-negative");
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double full = full_restricted(i, j);
      const double part = partial(i, j);
      if (part < (1.0 - tol) * full - 1e-12) {
        std::ostringstream msg;
        msg << std::setprecision(17) << "partial distance shorter than full distance at (" << i << ", " << j
            << "): " << part << " < " << full;
        throw ContractError(msg.str());
      }
      out(i, j) = part <= (1.0 + tol) * full ? 1.0 : 0.0;
    }
  }
  return out;
}

ConsistencyReport pair_statistics(const Matrix& consistent, const Matrix& ct, const Matrix& cw) {
  const Eigen::Index n = consistent.rows();
  if (consistent.cols() != n || ct.rows() != n || ct.cols() != n || cw.rows() != n || cw.cols() != n)
    throw ContractError("pair_statistics: matrices must share one square shape");
  ConsistencyReport r;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      ++r.n_pairs;
      const bool ok = consistent(i, j) != 0.0;
      const bool by_ct = ct(i, j) != 0.0;
      const bool by_cw = cw(i, j) != 0.0;
      if ((by_ct || by_cw) && !ok)
        throw ContractError("guaranteed pair (" + std::to_string(i) + ", " + std::to_string(j) + ") is not consistent");
      if (by_ct && !by_cw)
        throw ContractError("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") accepted by C_T but rejected by the wormhole mask");
      r.n_consistent += ok;
      r.n_ct += by_ct;
      r.n_cw += by_cw;
    }
  }
  // Empty denominators are reported as 100: nothing was missed.
  const auto pct = [](std::size_t num, std::size_t den) { return den == 0 ? 100.0 : 100.0 * double(num) / double(den); };
  r.pct_consistent = pct(r.n_consistent, r.n_pairs);
  r.pct_guaranteed_ct = pct(r.n_ct, r.n_consistent);
  r.pct_guaranteed_cw = pct(r.n_cw, r.n_consistent);
  return r;
}

void write_report(std::ostream& out, const ConsistencyReport& r) {
  out << std::setprecision(17);
  out << "pct_consistent = " << r.pct_consistent << '\n'
      << "pct_guaranteed_ct = " << r.pct_guaranteed_ct << '\n'
      << "pct_guaranteed_cw = " << r.pct_guaranteed_cw << '\n'
      << "n_pairs = " << r.n_pairs << '\n'
      << "n_consistent = " << r.n_consistent << '\n'
      << "n_ct = " << r.n_ct << '\n'
      << "n_cw = " << r.n_cw << '\n';
}

void save_report(const std::filesystem::path& path, const ConsistencyReport& report) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  write_report(out, report);
  if (!out) throw IoError("write failed: " + path.string());
}

ConsistencyReport parse_report(std::istream& in, const std::string& source) {
  std::map<std::string, std::pair<std::string, std::size_t>> kv;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ParseError(source, number, "expected 'key = value'");
    std::string value = line.substr(eq + 3);
    while (!value.empty() && (value.back() == '\r' || value.back() == ' ')) value.pop_back();
    kv[line.substr(0, eq)] = {std::move(value), number};
  }
  const auto get = [&]<typename T>(const std::string& key, T& out) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ParseError(source, number, "missing key " + key);
    const std::string& text = it->second.first;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc() || end != text.data() + text.size())
      throw ParseError(source, it->second.second, "bad value for " + key + ": '" + text + "'");
  };
  ConsistencyReport r;
  get("pct_consistent", r.pct_consistent);
  get("pct_guaranteed_ct", r.pct_guaranteed_ct);
  get("pct_guaranteed_cw", r.pct_guaranteed_cw);
  get("n_pairs", r.n_pairs);
  get("n_consistent", r.n_consistent);
  get("n_ct", r.n_ct);
  get("n_cw", r.n_cw);
  return r;
}

}  // namespace whkit
