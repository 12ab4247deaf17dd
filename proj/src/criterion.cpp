#include "whkit/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "whkit/error.hpp"
#include "whkit/parallel.hpp"

namespace whkit {

namespace {

void check_square_pair(const DistanceMatrix& distances, const Matrix& other, const char* what) {
  const auto n = static_cast<Eigen::Index>(distances.size());
  if (other.rows() != n || other.cols() != n)
    throw ContractError(std::string(what) + " shape does not match the distance matrix");
}

}  // namespace

MetricScale::MetricScale(double value) : c_m(value) {
  if (!(value >= 0.0) || !std::isfinite(value)) throw ContractError("metric floor c_m must be finite and >= 0");
}

double MetricScale::shortcut_factor() const { return std::sqrt(c_m); }

Matrix ct_mask(const DistanceMatrix& distances, const DistanceToBoundary& to_boundary) {
  const std::size_t n = distances.size();
  if (to_boundary.values.size() != n) throw ContractError("distance-to-boundary length mismatch");
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      m(i, j) = distances(i, j) <= to_boundary.values[i] + to_boundary.values[j] ? 1.0 : 0.0;
  return m;
}

Matrix threshold_naive(const DistanceMatrix& distances, const Matrix& boundary_rows,
                       std::span<const Vec3> boundary_coords, MetricScale scale, std::size_t batch) {
  const auto n = static_cast<Eigen::Index>(distances.size());
  const auto nb = static_cast<Eigen::Index>(boundary_coords.size());
  if (batch == 0) throw ContractError("batch must be positive");
  if (boundary_rows.rows() != nb || (nb > 0 && boundary_rows.cols() != n))
    throw ContractError("boundary rows must be |B| x n");
  Matrix k = Matrix::Constant(n, n, kInfinity);
  if (nb == 0) return k;

  const double factor = scale.shortcut_factor();
  const auto block = static_cast<Eigen::Index>(batch);

  // hub(i, b) = min_a d(v_i, B_a) + factor * |B_a - B_b|
  Matrix hub = Matrix::Constant(n, nb, kInfinity);
  Matrix shortcut(block, block);
  for (Eigen::Index a0 = 0; a0 < nb; a0 += block) {
    const Eigen::Index a1 = std::min(nb, a0 + block);
    for (Eigen::Index b0 = 0; b0 < nb; b0 += block) {
      const Eigen::Index b1 = std::min(nb, b0 + block);
      for (Eigen::Index a = a0; a < a1; ++a)
        for (Eigen::Index b = b0; b < b1; ++b)
          shortcut(a - a0, b - b0) = factor * (boundary_coords[a] - boundary_coords[b]).norm();
#pragma omp parallel for num_threads(thread_count()) schedule(static)
      for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index b = b0; b < b1; ++b) {
          double best = hub(i, b);
          for (Eigen::Index a = a0; a < a1; ++a) best = std::min(best, boundary_rows(a, i) + shortcut(a - a0, b - b0));
          hub(i, b) = best;
        }
      }
    }
  }

  // K(i, j) = min_b hub(i, b) + d(v_j, B_b)
  for (Eigen::Index b0 = 0; b0 < nb; b0 += block) {
    const Eigen::Index b1 = std::min(nb, b0 + block);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
    for (Eigen::Index i = 0; i < n; ++i) {
      auto krow = k.row(i);
      for (Eigen::Index b = b0; b < b1; ++b) {
        const double h = hub(i, b);
        const auto brow = boundary_rows.row(b);
        for (Eigen::Index j = 0; j < n; ++j) krow[j] = std::min(krow[j], h + brow[j]);
      }
    }
  }
  return k;
}

Matrix threshold_fast(const SurfaceGraph& graph, const BoundarySet& boundary, MetricScale scale) {
  boundary.check_range(graph.vertex_count());
  if (scale.c_m > 1.0)
    throw ContractError("threshold_fast requires c_m <= 1; use the naive algorithm for larger metric floors");
  if (boundary.empty()) return distance_matrix(graph).values();

  std::vector<Edge> edges = graph.adjacency().edges();
  const double factor = scale.shortcut_factor();
  const auto& b = boundary.indices();
  const auto& coords = graph.coords();
  edges.reserve(edges.size() + b.size() * (b.size() - 1) / 2);
  for (std::size_t x = 0; x < b.size(); ++x)
    for (std::size_t y = x + 1; y < b.size(); ++y)
      edges.push_back(Edge{b[x], b[y], factor * (coords[b[x]] - coords[b[y]]).norm()});
  const WeightedGraph augmented(graph.vertex_count(), edges);
  return distance_matrix(augmented).values();
}

Matrix binary_mask(const DistanceMatrix& distances, const Matrix& threshold) {
  check_square_pair(distances, threshold, "threshold");
  const std::size_t n = distances.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = within_threshold(distances(i, j), threshold(i, j)) ? 1.0 : 0.0;
  return m;
}

Matrix soft_mask(const DistanceMatrix& distances, const Matrix& threshold) {
  check_square_pair(distances, threshold, "threshold");
  const std::size_t n = distances.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = distances(i, j);
      const double k = threshold(i, j);
      m(i, j) = (d == 0.0 || within_threshold(d, k)) ? 1.0 : std::min(k / d, 1.0);
    }
  }
  return m;
}

MetricScale metric_floor(std::span<const Eigen::Matrix2d> tensors) {
  if (tensors.empty()) throw ContractError("metric_floor needs at least one tensor");
  double floor = kInfinity;
  for (std::size_t v = 0; v < tensors.size(); ++v) {
    const Eigen::Matrix2d& t = tensors[v];
    if (!t.allFinite()) throw ContractError("metric tensor " + std::to_string(v) + " is not finite");
    const double off = t(0, 1);
    if (std::abs(off - t(1, 0)) > 1e-12 * std::max({1.0, std::abs(off), std::abs(t(1, 0))}))
      throw ContractError("metric tensor " + std::to_string(v) + " is not symmetric");
    const double mean = 0.5 * (t(0, 0) + t(1, 1));
    const double half_gap = 0.5 * (t(0, 0) - t(1, 1));
    double smallest = mean - std::hypot(half_gap, off);
    const double scale = std::max({1.0, std::abs(t(0, 0)), std::abs(t(1, 1))});
    if (smallest < -1e-12 * scale) throw ContractError("metric tensor " + std::to_string(v) + " is not positive semi-definite");
    floor = std::min(floor, std::max(smallest, 0.0));
  }
  return MetricScale(floor);
}

MaskSet wormhole_masks(const SurfaceGraph& graph, const BoundarySet& boundary, const DistanceMatrix& distances,
                       MetricScale scale, ThresholdAlgorithm algorithm, std::size_t batch) {
  if (distances.size() != graph.vertex_count()) throw ContractError("distance matrix does not match graph");
  boundary.check_range(graph.vertex_count());
  MaskSet out;
  if (algorithm == ThresholdAlgorithm::fast && !boundary.empty()) {
    out.threshold = threshold_fast(graph, boundary, scale);
  } else {
    Matrix rows(static_cast<Eigen::Index>(boundary.size()), static_cast<Eigen::Index>(distances.size()));
    std::vector<Vec3> coords;
    coords.reserve(boundary.size());
    Eigen::Index r = 0;
    for (std::size_t b : boundary) {
      rows.row(r++) = distances.values().row(b);
      coords.push_back(graph.coords()[b]);
    }
    out.threshold = threshold_naive(distances, rows, coords, scale, batch);
  }
  out.mask = binary_mask(distances, out.threshold);
  out.soft = soft_mask(distances, out.threshold);
  return out;
}

}  // namespace whkit
