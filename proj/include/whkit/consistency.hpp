#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "whkit/geodesics.hpp"
#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit {

/// Full-surface vertex indices kept in the partial surface, strictly increasing.
class PartialSelection {
public:
  explicit PartialSelection(std::vector<std::size_t> kept);
  static PartialSelection complement(std::size_t vertex_count, std::vector<std::size_t> removed);

  const std::vector<std::size_t>& kept() const { return kept_; }
  std::size_t size() const { return kept_.size(); }

private:
  std::vector<std::size_t> kept_;
};

struct PartialSurface {
  SurfaceGraph graph;    // vertices renumbered in selection order
  BoundarySet boundary;  // kept vertices adjacent to a removed one, partial numbering
};

/// Vertex-induced subgraph. Throws ContractError listing components when the
/// result is disconnected.
PartialSurface induce_partial(const SurfaceGraph& full, const PartialSelection& selection);

/// Rows/columns of `full` picked by the selection.
DistanceMatrix restrict_distances(const DistanceMatrix& full, const PartialSelection& selection);

/// 1 where D_partial <= (1 + tol) * D_full. Throws ContractError if some
/// partial distance is shorter than the full one beyond the tolerance.
Matrix consistent_pairs(const DistanceMatrix& full_restricted, const DistanceMatrix& partial,
                        double tol = 1e-9);

struct ConsistencyReport {
  double pct_consistent = 0.0;
  double pct_guaranteed_ct = 0.0;
  double pct_guaranteed_cw = 0.0;
  std::size_t n_pairs = 0;
  std::size_t n_consistent = 0;
  std::size_t n_ct = 0;
  std::size_t n_cw = 0;
};

/// Counts over unordered distinct pairs (strict upper triangle). Throws
/// ContractError if a guaranteed pair is inconsistent or if a C_T pair is
/// missing from the wormhole mask.
ConsistencyReport pair_statistics(const Matrix& consistent, const Matrix& ct, const Matrix& cw);

void write_report(std::ostream& out, const ConsistencyReport& report);
void save_report(const std::filesystem::path& path, const ConsistencyReport& report);
ConsistencyReport parse_report(std::istream& in, const std::string& source = "<stream>");

}  // namespace whkit
