#include "whkit/geodesics.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <string>

#include "whkit/error.hpp"
#include "whkit/parallel.hpp"

namespace whkit {

namespace {

using HeapEntry = std::pair<double, std::size_t>;
using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>>;

// Lazy-deletion Dijkstra. `dist` must be pre-filled with +inf except at seeds.
void run_dijkstra(const WeightedGraph& graph, std::span<double> dist, MinHeap& heap) {
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d > dist[v]) continue;
    for (const Arc& a : graph.neighbors(v)) {
      const double candidate = d + a.weight;
      if (candidate < dist[a.target]) {
        dist[a.target] = candidate;
        heap.emplace(candidate, a.target);
      }
    }
  }
}

void single_source_into(const WeightedGraph& graph, std::size_t source, std::span<double> dist, MinHeap& heap) {
  std::fill(dist.begin(), dist.end(), kInfinity);
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  run_dijkstra(graph, dist, heap);
}

}  // namespace

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
  if (values_.rows() != values_.cols()) throw ContractError("distance matrix must be square");
}

std::vector<double> single_source(const WeightedGraph& graph, std::size_t source) {
  if (source >= graph.vertex_count()) throw ContractError("source vertex out of range");
  std::vector<double> dist(graph.vertex_count());
  MinHeap heap;
  single_source_into(graph, source, dist, heap);
  return dist;
}

DistanceToBoundary multi_source(const WeightedGraph& graph, const BoundarySet& sources) {
  sources.check_range(graph.vertex_count());
  DistanceToBoundary out{std::vector<double>(graph.vertex_count(), kInfinity)};
  MinHeap heap;
  for (std::size_t s : sources) {
    out.values[s] = 0.0;
    heap.emplace(0.0, s);
  }
  run_dijkstra(graph, out.values, heap);
  return out;
}

Matrix distance_rows(const WeightedGraph& graph, std::span<const std::size_t> sources) {
  const std::size_t n = graph.vertex_count();
  for (std::size_t s : sources)
    if (s >= n) throw ContractError("source vertex out of range");
  Matrix rows(static_cast<Eigen::Index>(sources.size()), static_cast<Eigen::Index>(n));
  const auto count = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel num_threads(thread_count())
  {
    MinHeap heap;
#pragma omp for schedule(dynamic, 8)
    for (std::ptrdiff_t r = 0; r < count; ++r)
      single_source_into(graph, sources[r], std::span<double>(rows.row(r).data(), n), heap);
  }
  return rows;
}

DistanceMatrix distance_matrix(const WeightedGraph& graph) {
  const std::size_t n = graph.vertex_count();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;
  Matrix d = distance_rows(graph, all);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::isinf(d(i, j)) || std::isinf(d(j, i)))
        throw ContractError("graph is disconnected: vertices " + std::to_string(i) + " and " + std::to_string(j) +
                            " are mutually unreachable");
      // Forward and reverse sums of the same path may differ in the last bit.
      const double m = std::min(d(i, j), d(j, i));
      d(i, j) = m;
      d(j, i) = m;
    }
  }
  return DistanceMatrix(std::move(d));
}

}  // namespace whkit
