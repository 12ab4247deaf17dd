#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

#include "whkit/geodesics.hpp"
#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit {

/// Floor of the smallest metric eigenvalue over the surface. The boundary
/// shortcut is scaled by sqrt(c_m); c_m = 1 is the metric induced by the
/// embedding, c_m = 0 drops the shortcut entirely.
struct MetricScale {
  double c_m = 1.0;

  MetricScale() = default;
  explicit MetricScale(double value);
  double shortcut_factor() const;
};

struct MaskSet {
  Matrix threshold;  // K (or K~ from the augmented-graph route)
  Matrix mask;       // binary, stored as 0.0 / 1.0
  Matrix soft;
};

enum class ThresholdAlgorithm { naive, fast };

inline constexpr std::size_t kDefaultBatch = 256;

/// d <= k with tolerance 1e-9 * max(1, d), so boundary-tight pairs stay accepted.
inline bool within_threshold(double d, double k) { return d <= k + 1e-9 * std::max(1.0, d); }

/// Pairs accepted by the distance-to-boundary test: D_ij <= db_i + db_j.
Matrix ct_mask(const DistanceMatrix& distances, const DistanceToBoundary& to_boundary);

/// Wormhole threshold by direct minimisation over boundary pairs:
///   K_ij = min_{a,b} d(v_i, B_a) + d(v_j, B_b) + sqrt(c_m) * |B_a - B_b|.
/// `boundary_rows` holds one full distance row per boundary vertex (|B| x n).
/// Boundary pairs are visited in blocks of `batch` x `batch`; the
/// minimisation is split into two passes through an n x |B| intermediate.
/// An empty boundary gives +infinity everywhere.
Matrix threshold_naive(const DistanceMatrix& distances, const Matrix& boundary_rows,
                       std::span<const Vec3> boundary_coords, MetricScale scale,
                       std::size_t batch = kDefaultBatch);

/// Wormhole threshold from shortest paths on the graph augmented with one
/// edge per boundary pair, weighted sqrt(c_m) * Euclidean length. Equals
/// min(D, K) elementwise. Requires c_m <= 1 (see README); an empty
/// boundary returns D.
Matrix threshold_fast(const SurfaceGraph& graph, const BoundarySet& boundary, MetricScale scale);

Matrix binary_mask(const DistanceMatrix& distances, const Matrix& threshold);

/// min(K/D, 1), with 1 on the diagonal and wherever the binary mask accepts.
Matrix soft_mask(const DistanceMatrix& distances, const Matrix& threshold);

/// Smallest eigenvalue over a field of symmetric PSD 2x2 tangent metrics.
MetricScale metric_floor(std::span<const Eigen::Matrix2d> tensors);

/// Full pipeline for one partial surface: distances to boundary, threshold,
/// binary and soft masks.
MaskSet wormhole_masks(const SurfaceGraph& graph, const BoundarySet& boundary, const DistanceMatrix& distances,
                       MetricScale scale, ThresholdAlgorithm algorithm, std::size_t batch = kDefaultBatch);

}  // namespace whkit
