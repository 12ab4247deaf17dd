#pragma once

#include <cstddef>
#include <vector>

#include "whkit/criterion.hpp"
#include "whkit/geodesics.hpp"
#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit {

struct Embedding {
  Matrix coords;                    // n x m
  std::vector<double> stress_trace;  // stress of the initial configuration, then one entry per iteration
  std::size_t iterations = 0;
};

struct ClassicalScaling {
  Matrix coords;
  /// Set when fewer than m positive eigenvalues exist; missing columns are zero.
  bool rank_deficient = false;
};

/// Top-m eigenpairs of -1/2 J D^2 J; negative eigenvalues are clamped to zero.
ClassicalScaling classical_scaling(const DistanceMatrix& distances, std::size_t dims);

/// Sum over ordered pairs i != j of W_ij (|x_i - x_j| - D_ij)^2.
double stress(const Matrix& coords, const DistanceMatrix& distances, const Matrix& weights);

struct SmacofOptions {
  std::size_t max_iter = 500;
  double rel_tol = 1e-6;
};

/// Weighted stress majorization (Guttman transform with the pseudo-inverse of
/// the weight Laplacian). Stops once the relative stress decrease falls
/// below rel_tol. Throws ContractError if a vertex has no positive weight or
/// the weight graph is disconnected.
Embedding smacof_weighted(const DistanceMatrix& distances, const Matrix& weights, const Matrix& init,
                          SmacofOptions options = {});

/// mask, then 1 wherever D_ij < local_radius.
Matrix build_weights(const DistanceMatrix& distances, const Matrix& mask, double local_radius);

enum class WeightScheme {
  uniform,   // all pairs
  ct,        // distance-to-boundary criterion (TCIE)
  wormhole,  // wormhole criterion (WHCIE)
};

struct MdsOptions {
  std::size_t dims = 2;
  double local_radius = 3.0;
  SmacofOptions smacof;
  MetricScale scale;
};

struct MdsRun {
  Embedding embedding;
  Matrix initial;                    // classical scaling start
  std::size_t weighted_pairs = 0;   // unordered pairs with positive weight
};

/// distances -> mask -> weights -> classical scaling -> weighted SMACOF.
MdsRun masked_mds(const SurfaceGraph& graph, const BoundarySet& boundary, WeightScheme scheme,
                  const MdsOptions& options = {});

inline Embedding whcie(const SurfaceGraph& graph, const BoundarySet& boundary, const MdsOptions& options = {}) {
  return masked_mds(graph, boundary, WeightScheme::wormhole, options).embedding;
}

/// RMSE between a and b after the best rigid motion (reflections allowed) of a onto b.
double procrustes_error(const Matrix& a, const Matrix& b);

}  // namespace whkit
