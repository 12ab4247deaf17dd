#include "whkit/matching.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "whkit/error.hpp"

namespace whkit {

namespace {

void check_loss_inputs(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                       const Matrix& mask, const VertexAreas& areas) {
  const auto nx = static_cast<Eigen::Index>(full.size());
  const auto ny = static_cast<Eigen::Index>(partial.size());
  if (P.rows() != ny || P.cols() != nx) throw ContractError("P must be (partial count) x (full count)");
  if (mask.rows() != ny || mask.cols() != ny) throw ContractError("mask must match the partial distance matrix");
  if (areas.values.size() != ny) throw ContractError("areas must have one entry per partial vertex");
  if ((mask.array() < 0.0).any() || (mask.array() > 1.0).any()) throw ContractError("mask entries must lie in [0, 1]");
}

// mask_ij a_i a_j (P D_X P^T - D_Y')_ij
Matrix weighted_residual(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                         const Matrix& mask, const VertexAreas& areas) {
  Matrix residual = P * full.values() * P.transpose() - partial.values();
  const Vector& a = areas.values;
  return (mask.array() * (a * a.transpose()).array() * residual.array()).matrix();
}

}  // namespace

void Correspondence::validate(double tol) const {
  if (!P.allFinite()) throw ContractError("correspondence has non-finite entries");
  if ((P.array() < 0.0).any() || (P.array() > 1.0).any()) throw ContractError("correspondence entries must lie in [0, 1]");
  for (Eigen::Index i = 0; i < P.rows(); ++i)
    if (std::abs(P.row(i).sum() - 1.0) > tol)
      throw ContractError("correspondence row " + std::to_string(i) + " does not sum to one");
}

Correspondence softmax_correspondence(const Matrix& full_features, const Matrix& partial_features, double tau) {
  if (!(tau > 0.0)) throw ContractError("temperature must be positive");
  if (full_features.cols() != partial_features.cols()) throw ContractError("feature dimensions differ");
  Correspondence out{(partial_features * full_features.transpose()) / tau};
  for (Eigen::Index i = 0; i < out.P.rows(); ++i) {
    auto row = out.P.row(i);
    row.array() = (row.array() - row.maxCoeff()).exp();
    row /= row.sum();
  }
  return out;
}

double masked_geo_loss(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                       const Matrix& mask, const VertexAreas& areas) {
  check_loss_inputs(P, full, partial, mask, areas);
  Matrix residual = P * full.values() * P.transpose() - partial.values();
  const Vector& a = areas.values;
  return (mask.array() * (a * a.transpose()).array() * residual.array().square()).sum();
}

Matrix masked_geo_loss_grad(const Matrix& P, const DistanceMatrix& full, const DistanceMatrix& partial,
                            const Matrix& mask, const VertexAreas& areas) {
  check_loss_inputs(P, full, partial, mask, areas);
  const Matrix e = weighted_residual(P, full, partial, mask, areas);
  return 2.0 * (e * P * full.values().transpose() + e.transpose() * P * full.values());
}

SpectralBasis lbo_basis(const TriangleMesh& mesh, std::size_t k) {
  mesh.validate();
  const auto n = static_cast<Eigen::Index>(mesh.vertex_count());
  if (k == 0 || static_cast<Eigen::Index>(k) > n) throw ContractError("lbo_basis requires 0 < k <= vertex count");
  if (connected_components(mesh_graph(mesh).adjacency()).count != 1) throw ContractError("lbo_basis: mesh is disconnected");

  SpectralBasis out;
  out.areas = vertex_areas(mesh);

  Eigen::MatrixXd stiffness = Eigen::MatrixXd::Zero(n, n);
  for (const Face& f : mesh.faces) {
    for (int c = 0; c < 3; ++c) {
      const std::size_t apex = f[c];
      const std::size_t i = f[(c + 1) % 3];
      const std::size_t j = f[(c + 2) % 3];
      const Vec3 e1 = mesh.vertices[i] - mesh.vertices[apex];
      const Vec3 e2 = mesh.vertices[j] - mesh.vertices[apex];
      // Sliver triangles: clamp the sine term so the cotangent stays finite.
      const double half_cot = 0.5 * e1.dot(e2) / std::max(e1.cross(e2).norm(), 1e-10);
      stiffness(i, j) -= half_cot;
      stiffness(j, i) -= half_cot;
      stiffness(i, i) += half_cot;
      stiffness(j, j) += half_cot;
    }
  }

  // Diagonal mass: solve the symmetric problem A^-1/2 L A^-1/2 psi = lambda psi.
  const Eigen::VectorXd inv_sqrt_mass = out.areas.values.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd reduced = inv_sqrt_mass.asDiagonal() * stiffness * inv_sqrt_mass.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(reduced);
  if (solver.info() != Eigen::Success) throw ContractError("lbo_basis: eigen-decomposition failed");

  const auto kk = static_cast<Eigen::Index>(k);
  const double scale = std::max(1.0, std::abs(solver.eigenvalues()[kk - 1]));
  out.eigenvalues = solver.eigenvalues().head(kk);
  for (Eigen::Index c = 0; c < kk; ++c)
    if (std::abs(out.eigenvalues[c]) <= 1e-10 * scale) out.eigenvalues[c] = std::max(out.eigenvalues[c], 0.0);
  out.eigenfunctions = inv_sqrt_mass.asDiagonal() * solver.eigenvectors().leftCols(kk);
  for (Eigen::Index c = 0; c < kk; ++c) {
    Eigen::Index pivot = 0;
    out.eigenfunctions.col(c).cwiseAbs().maxCoeff(&pivot);
    if (out.eigenfunctions(pivot, c) < 0) out.eigenfunctions.col(c) *= -1.0;
  }
  return out;
}

FunctionalMap functional_map(const Matrix& P, const SpectralBasis& full, const SpectralBasis& partial) {
  if (P.rows() != partial.eigenfunctions.rows() || P.cols() != full.eigenfunctions.rows())
    throw ContractError("functional_map: P does not match the basis vertex counts");
  if (partial.areas.values.size() != partial.eigenfunctions.rows())
    throw ContractError("functional_map: partial areas do not match its basis");
  FunctionalMap fm;
  fm.C = partial.eigenfunctions.transpose() * partial.areas.values.asDiagonal() * P * full.eigenfunctions;
  const double largest = full.eigenvalues.size() ? full.eigenvalues.maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < partial.eigenvalues.size(); ++i) fm.rank += partial.eigenvalues[i] < largest;
  fm.rank = std::min<std::size_t>(fm.rank, static_cast<std::size_t>(full.eigenvalues.size()));
  return fm;
}

double ortho_loss(const FunctionalMap& fm) {
  const Eigen::Index k = fm.C.rows();
  if (static_cast<Eigen::Index>(fm.rank) > k) throw ContractError("ortho_loss: rank exceeds C rows");
  Matrix target = Matrix::Zero(k, k);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(fm.rank); ++i) target(i, i) = 1.0;
  return (fm.C * fm.C.transpose() - target).norm();
}

}  // namespace whkit
