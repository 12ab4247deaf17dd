#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit {

/// Dense symmetric matrix of shortest-path distances with zero diagonal.
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(Matrix values);

  std::size_t size() const { return static_cast<std::size_t>(values_.rows()); }
  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Matrix& values() const { return values_; }
  double max() const { return values_.size() ? values_.maxCoeff() : 0.0; }

private:
  Matrix values_;
};

struct DistanceToBoundary {
  std::vector<double> values;
};

/// Dijkstra from one source. Unreachable vertices get +infinity.
std::vector<double> single_source(const WeightedGraph& graph, std::size_t source);
inline std::vector<double> single_source(const SurfaceGraph& graph, std::size_t source) {
  return single_source(graph.adjacency(), source);
}

/// Distance to the nearest source; +infinity everywhere when sources is empty.
DistanceToBoundary multi_source(const WeightedGraph& graph, const BoundarySet& sources);
inline DistanceToBoundary multi_source(const SurfaceGraph& graph, const BoundarySet& sources) {
  return multi_source(graph.adjacency(), sources);
}

/// One full distance row per source, |sources| x n. Rows are computed in parallel.
Matrix distance_rows(const WeightedGraph& graph, std::span<const std::size_t> sources);

/// All-pairs distances as n single-source runs. Throws ContractError naming an
/// unreachable pair when the graph is disconnected.
DistanceMatrix distance_matrix(const WeightedGraph& graph);
inline DistanceMatrix distance_matrix(const SurfaceGraph& graph) { return distance_matrix(graph.adjacency()); }

}  // namespace whkit
