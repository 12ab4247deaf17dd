#include "whkit/embedding.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "whkit/error.hpp"
#include "whkit/parallel.hpp"

namespace whkit {

namespace {

void check_weights(const DistanceMatrix& distances, const Matrix& weights) {
  const auto n = static_cast<Eigen::Index>(distances.size());
  if (weights.rows() != n || weights.cols() != n) throw ContractError("weight matrix shape mismatch");
}

// B(X) X of the Guttman transform, one independent row per vertex.
Matrix guttman_product(const Matrix& x, const DistanceMatrix& distances, const Matrix& weights) {
  const Eigen::Index n = x.rows();
  Matrix out = Matrix::Zero(n, x.cols());
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    auto row = out.row(i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = weights(i, j);
      if (w == 0.0) continue;
      const double dij = (x.row(i) - x.row(j)).norm();
      if (dij <= 0.0) continue;
      row += (w * distances(i, j) / dij) * (x.row(i) - x.row(j));
    }
  }
  return out;
}

}  // namespace

ClassicalScaling classical_scaling(const DistanceMatrix& distances, std::size_t dims) {
  const auto n = static_cast<Eigen::Index>(distances.size());
  if (dims == 0 || static_cast<Eigen::Index>(dims) >= n) throw ContractError("classical scaling requires 1 <= m < n");
  Eigen::MatrixXd b = distances.values().array().square().matrix();
  const Eigen::VectorXd row_mean = b.rowwise().mean();
  const Eigen::RowVectorXd col_mean = b.colwise().mean();
  const double mean = b.mean();
  b = (-0.5 * ((b.colwise() - row_mean).rowwise() - col_mean).array() - 0.5 * mean).matrix();
  b = 0.5 * (b + b.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
  if (solver.info() != Eigen::Success) throw ContractError("classical scaling eigen-decomposition failed");
  const Eigen::VectorXd& values = solver.eigenvalues();
  const double tol = 1e-12 * std::max(values.cwiseAbs().maxCoeff(), 0.0);

  ClassicalScaling out{Matrix::Zero(n, static_cast<Eigen::Index>(dims)), false};
  for (std::size_t c = 0; c < dims; ++c) {
    const Eigen::Index k = n - 1 - static_cast<Eigen::Index>(c);
    const double lambda = values[k];
    if (!(lambda > tol)) {
      out.rank_deficient = true;
      continue;
    }
    Eigen::VectorXd v = solver.eigenvectors().col(k);
    Eigen::Index pivot = 0;
    v.cwiseAbs().maxCoeff(&pivot);
    if (v[pivot] < 0) v = -v;  // sign convention for reproducible output
    out.coords.col(static_cast<Eigen::Index>(c)) = v * std::sqrt(lambda);
  }
  return out;
}

double stress(const Matrix& coords, const DistanceMatrix& distances, const Matrix& weights) {
  check_weights(distances, weights);
  const Eigen::Index n = coords.rows();
  if (n != static_cast<Eigen::Index>(distances.size())) throw ContractError("coordinate count mismatch");
  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for num_threads(thread_count()) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i || weights(i, j) == 0.0) continue;
      const double r = (coords.row(i) - coords.row(j)).norm() - distances(i, j);
      acc += weights(i, j) * r * r;
    }
    partial[static_cast<std::size_t>(i)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

Embedding smacof_weighted(const DistanceMatrix& distances, const Matrix& weights, const Matrix& init,
                          SmacofOptions options) {
  check_weights(distances, weights);
  const auto n = static_cast<Eigen::Index>(distances.size());
  if (init.rows() != n || init.cols() < 1) throw ContractError("initial configuration must be n x m");
  if (!(weights - weights.transpose()).isZero(0.0)) throw ContractError("weights must be symmetric");

  // Weight Laplacian plus the rank-one term that removes its constant kernel.
  Eigen::MatrixXd system = Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double degree = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double w = weights(i, j);
      if (w < 0.0) throw ContractError("weights must be non-negative");
      degree += w;
      system(i, j) -= w;
    }
    if (degree == 0.0) throw ContractError("unconstrained vertex " + std::to_string(i) + ": all its weights are zero");
    system(i, i) += degree;
  }
  const Eigen::LLT<Eigen::MatrixXd> factor(system);
  if (factor.info() != Eigen::Success) throw ContractError("weight graph is disconnected; SMACOF is ill-posed");

  Embedding out;
  out.coords = init.rowwise() - init.colwise().mean();
  out.stress_trace.push_back(stress(out.coords, distances, weights));
  for (std::size_t it = 0; it < options.max_iter; ++it) {
    const double previous = out.stress_trace.back();
    if (previous == 0.0) break;
    const Eigen::MatrixXd rhs = guttman_product(out.coords, distances, weights);
    Matrix next = factor.solve(rhs);
    const double current = stress(next, distances, weights);
    out.coords = std::move(next);
    out.stress_trace.push_back(current);
    out.iterations = it + 1;
    if ((previous - current) < options.rel_tol * previous) break;
  }
  return out;
}

Matrix build_weights(const DistanceMatrix& distances, const Matrix& mask, double local_radius) {
  check_weights(distances, mask);
  if (!(local_radius >= 0.0)) throw ContractError("local radius must be non-negative");
  Matrix w = mask;
  const std::size_t n = distances.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (distances(i, j) < local_radius) w(i, j) = 1.0;
  return w;
}

MdsRun masked_mds(const SurfaceGraph& graph, const BoundarySet& boundary, WeightScheme scheme,
                  const MdsOptions& options) {
  const DistanceMatrix distances = distance_matrix(graph);
  const auto n = static_cast<Eigen::Index>(distances.size());
  Matrix mask;
  switch (scheme) {
    case WeightScheme::uniform:
      mask = Matrix::Ones(n, n);
      break;
    case WeightScheme::ct:
      mask = ct_mask(distances, multi_source(graph, boundary));
      break;
    case WeightScheme::wormhole:
      mask = wormhole_masks(graph, boundary, distances, options.scale, ThresholdAlgorithm::fast).mask;
      break;
  }
  const Matrix weights = build_weights(distances, mask, options.local_radius);

  MdsRun run;
  run.initial = classical_scaling(distances, options.dims).coords;
  run.embedding = smacof_weighted(distances, weights, run.initial, options.smacof);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) run.weighted_pairs += weights(i, j) > 0.0;
  return run;
}

double procrustes_error(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractError("procrustes_error: shape mismatch");
  if (a.rows() == 0) return 0.0;
  const Eigen::MatrixXd ac = a.rowwise() - a.colwise().mean();
  const Eigen::MatrixXd bc = b.rowwise() - b.colwise().mean();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(ac.transpose() * bc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  return std::sqrt((ac * rotation - bc).squaredNorm() / static_cast<double>(a.rows()));
}

}  // namespace whkit
