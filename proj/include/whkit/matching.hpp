#pragma once

#include <cstddef>

#include "whkit/geodesics.hpp"
#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit {

/// Soft partial-to-full matching: rows index partial vertices, columns full
/// vertices, each row sums to one.
struct Correspondence {
  Matrix P;

  void validate(double tol = 1e-9) const;
};

/// Row-wise softmax of F_partial F_full^T / tau.
Correspondence softmax_correspondence(const Matrix& full_features, const Matrix& partial_features, double tau);

/// sum_ij mask_ij a_i a_j ((P D_X P^T - D_Y')_ij)^2 with a the partial vertex areas.
/// P need not be row-stochastic here so that the loss can be probed off the simplex.
double masked_geo_loss(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                       const Matrix& mask, const VertexAreas& areas);

/// Analytic d(masked_geo_loss)/dP.
Matrix masked_geo_loss_grad(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                            const Matrix& mask, const VertexAreas& areas);

struct SpectralBasis {
  Vector eigenvalues;   // ascending, >= 0
  Matrix eigenfunctions;  // n x k, orthonormal under the mass matrix
  VertexAreas areas;
};

/// k smallest eigenpairs of the cotangent Laplacian against the lumped
/// barycentric mass matrix.
SpectralBasis lbo_basis(const TriangleMesh& mesh, std::size_t k);

struct FunctionalMap {
  Matrix C;           // k_partial x k_full
  std::size_t rank = 0;  // size of the identity block in the orthogonality target
};

/// C = Phi_partial^T A_partial P Phi_full; rank counts partial eigenvalues
/// strictly below the largest full eigenvalue (capped at k_full).
FunctionalMap functional_map(const Matrix& P, const SpectralBasis& full, const SpectralBasis& partial);

/// || C C^T - J_r ||_F
double ortho_loss(const FunctionalMap& fm);

inline constexpr double kDefaultLambdaGeo = 1e3;
inline constexpr double kDefaultLambdaOrtho = 1.0;

inline double total_loss(double geo, double ortho, double lambda_geo = kDefaultLambdaGeo,
                         double lambda_ortho = kDefaultLambdaOrtho) {
  return lambda_geo * geo + lambda_ortho * ortho;
}

}  // namespace whkit
