#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "whkit/error.hpp"
#include "whkit/generators.hpp"
#include "whkit/geodesics.hpp"
#include "whkit/matching.hpp"

using namespace whkit;

namespace {

Matrix chain3() {
  Matrix d(3, 3);
  d << 0, 1, 2, 1, 0, 1, 2, 1, 0;
  return d;
}

VertexAreas areas_of(const Vector& v) { return VertexAreas{v}; }

// Area-weighted Frobenius form tr(X^T A X A) of the masked residual.
double norm_form(const Matrix& p, const Matrix& dx, const Matrix& dy, const Matrix& mask, const Vector& a) {
  const Matrix x = mask.cwiseSqrt().cwiseProduct(p * dx * p.transpose() - dy);
  const Matrix am = a.asDiagonal();
  return (x.transpose() * am * x * am).trace();
}

struct Instance {
  Matrix p, dx, dy, mask;
  Vector a;
};

Matrix random_metric(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 4.0);
  Matrix x(n, 3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = u(rng);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = (x.row(i) - x.row(j)).norm();
  return d;
}

Instance random_instance(std::uint64_t seed, bool binary) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::size_t nx = size(rng), ny = size(rng);
  Instance in;
  in.dx = random_metric(nx, rng);
  in.dy = random_metric(ny, rng);
  in.p.resize(ny, nx);
  for (Eigen::Index i = 0; i < in.p.size(); ++i) in.p.data()[i] = u(rng);
  for (std::size_t i = 0; i < ny; ++i) in.p.row(i) /= in.p.row(i).sum();
  in.mask.resize(ny, ny);
  for (std::size_t i = 0; i < ny; ++i)
    for (std::size_t j = 0; j <= i; ++j) in.mask(i, j) = in.mask(j, i) = binary ? (u(rng) < 0.6 ? 1.0 : 0.0) : u(rng);
  in.a.resize(ny);
  for (std::size_t i = 0; i < ny; ++i) in.a[i] = 0.1 + u(rng);
  return in;
}

double loss(const Instance& in, const Matrix& p) {
  return masked_geo_loss(p, DistanceMatrix(in.dx), DistanceMatrix(in.dy), in.mask, areas_of(in.a));
}

const char* kOctahedron =
    "OFF\n6 8 0\n1 0 0\n-1 0 0\n0 1 0\n0 -1 0\n0 0 1\n0 0 -1\n"
    "3 0 2 4\n3 2 1 4\n3 1 3 4\n3 3 0 4\n3 2 0 5\n3 1 2 5\n3 3 1 5\n3 0 3 5\n";

TriangleMesh octahedron() {
  std::istringstream in(kOctahedron);
  return parse_off(in);
}

}  // namespace

TEST_CASE("masked_geo_loss fixtures") {
  const DistanceMatrix dx(chain3());
  const Matrix id = Matrix::Identity(3, 3);
  const VertexAreas ones = areas_of(Vector::Ones(3));
  CHECK(masked_geo_loss(id, dx, dx, Matrix::Ones(3, 3), ones) == 0.0);
  CHECK(masked_geo_loss(id, dx, DistanceMatrix(chain3() * 3.0), Matrix::Zero(3, 3), ones) == 0.0);

  Matrix dy = chain3();
  dy.array() += 1.0;
  dy.diagonal().setZero();
  CHECK(masked_geo_loss(id, dx, DistanceMatrix(dy), Matrix::Ones(3, 3), ones) == 6.0);

  CHECK_THROWS_AS(masked_geo_loss(Matrix::Identity(2, 3), dx, dx, Matrix::Ones(3, 3), ones), ContractError);
  CHECK_THROWS_AS(masked_geo_loss(id, dx, dx, Matrix::Ones(2, 2), ones), ContractError);
}

TEST_CASE("masked_geo_loss equals the area-weighted norm form") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Instance in = random_instance(seed, true);
    const double expected = norm_form(in.p, in.dx, in.dy, in.mask, in.a);
    CHECK(loss(in, in.p) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("mask monotonicity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Instance in = random_instance(seed, false);
    const double before = loss(in, in.p);
    in.mask = in.mask.unaryExpr([&](double m) { return m * u(rng); });
    CHECK(loss(in, in.p) <= before + 1e-12);
  }
}

TEST_CASE("gradient matches central differences over 100 seeds") {
  const double h = 1e-6;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance in = random_instance(seed, seed % 2 == 0);
    const Matrix g = masked_geo_loss_grad(in.p, DistanceMatrix(in.dx), DistanceMatrix(in.dy), in.mask, areas_of(in.a));
    Matrix fd(in.p.rows(), in.p.cols());
    for (Eigen::Index i = 0; i < in.p.size(); ++i) {
      Matrix plus = in.p, minus = in.p;
      plus.data()[i] += h;
      minus.data()[i] -= h;
      fd.data()[i] = (loss(in, plus) - loss(in, minus)) / (2.0 * h);
    }
    const double scale = std::max(1.0, g.norm());
    CHECK((g - fd).norm() / scale <= 1e-5);
  }
}

TEST_CASE("gradient vanishes at the zero-loss point and for an empty mask") {
  const Matrix dx = distance_matrix(testing::lattice(3, 3)).values();
  const Matrix id = Matrix::Identity(9, 9);
  const VertexAreas a = areas_of(Vector::Constant(9, 0.3));
  const Matrix g = masked_geo_loss_grad(id, DistanceMatrix(dx), DistanceMatrix(dx), Matrix::Ones(9, 9), a);
  CHECK(g.cwiseAbs().maxCoeff() <= 1e-9);

  const Instance in = random_instance(3, false);
  const Matrix z = masked_geo_loss_grad(in.p, DistanceMatrix(in.dx), DistanceMatrix(in.dy),
                                        Matrix::Zero(in.mask.rows(), in.mask.cols()), areas_of(in.a));
  CHECK(z.isZero(0.0));
}

TEST_CASE("softmax correspondence") {
  const Correspondence flat = softmax_correspondence(Matrix::Ones(5, 3), Matrix::Ones(4, 3), 0.07);
  CHECK(flat.P.rows() == 4);
  CHECK(flat.P.cols() == 5);
  for (Eigen::Index i = 0; i < flat.P.size(); ++i) CHECK(flat.P.data()[i] == doctest::Approx(0.2).epsilon(1e-14));

  Matrix full(4, 1), part(2, 1);
  full << 0, 1, 2, 3;
  part << 1, -1;
  const Correspondence sharp = softmax_correspondence(full, part, 1e-4);
  CHECK(sharp.P(0, 3) > 0.99);
  CHECK(sharp.P(1, 0) > 0.99);
  CHECK_NOTHROW(sharp.validate());

  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 3.0);
  Matrix f1(30, 8), f2(12, 8);
  for (Eigen::Index i = 0; i < f1.size(); ++i) f1.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < f2.size(); ++i) f2.data()[i] = g(rng);
  const Correspondence c = softmax_correspondence(f1, f2, 0.07);
  CHECK(c.P.allFinite());
  CHECK((c.P.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);

  CHECK_THROWS_AS(softmax_correspondence(f1, f2, 0.0), ContractError);
  CHECK_THROWS_AS(softmax_correspondence(f1, Matrix::Ones(2, 3), 1.0), ContractError);
  CHECK_THROWS_AS(Correspondence{Matrix::Ones(2, 2)}.validate(), ContractError);
}

TEST_CASE("LBO basis") {
  const TriangleMesh grid = gen_grid_with_defect(6, 7, 0.5).mesh;
  const SpectralBasis b = lbo_basis(grid, 12);
  CHECK(b.eigenvalues[0] <= 1e-8);
  CHECK((b.eigenvalues.array() >= 0.0).all());
  for (Eigen::Index i = 1; i < b.eigenvalues.size(); ++i) CHECK(b.eigenvalues[i] >= b.eigenvalues[i - 1]);
  const Vector phi0 = b.eigenfunctions.col(0);
  CHECK((phi0.maxCoeff() - phi0.minCoeff()) <= 1e-6 * phi0.cwiseAbs().maxCoeff());
  const Matrix gram = b.eigenfunctions.transpose() * b.areas.values.asDiagonal() * b.eigenfunctions;
  CHECK((gram - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff() <= 1e-6);

  CHECK_THROWS_AS(lbo_basis(grid, 0), ContractError);
  CHECK_THROWS_AS(lbo_basis(grid, grid.vertex_count() + 1), ContractError);
  std::istringstream two("OFF\n6 2 0\n0 0 0\n1 0 0\n0 1 0\n5 0 0\n6 0 0\n5 1 0\n3 0 1 2\n3 3 4 5\n");
  CHECK_THROWS_AS(lbo_basis(parse_off(two), 2), ContractError);
}

TEST_CASE("sphere spectrum") {
  const SpectralBasis b = lbo_basis(testing::icosphere(3), 5);
  for (int i = 1; i <= 3; ++i) CHECK(std::abs(b.eigenvalues[i] - 2.0) <= 0.2);
  CHECK(b.eigenvalues[4] > 4.0);
}

TEST_CASE("functional map") {
  const TriangleMesh mesh = testing::icosphere(1);
  const SpectralBasis full = lbo_basis(mesh, 10);
  const std::size_t n = mesh.vertex_count();
  const FunctionalMap same = functional_map(Matrix::Identity(n, n), full, full);
  CHECK((same.C - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-6);

  SpectralBasis truncated = full;
  truncated.eigenvalues = full.eigenvalues.head(4);
  truncated.eigenfunctions = full.eigenfunctions.leftCols(4);
  const FunctionalMap block = functional_map(Matrix::Identity(n, n), full, truncated);
  Matrix expected = Matrix::Zero(4, 10);
  expected.leftCols(4).setIdentity();
  CHECK((block.C - expected).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(block.rank == 4);
  CHECK(ortho_loss(block) <= 1e-6);

  // Octahedron (6 vertices) onto a two-triangle square.
  const SpectralBasis bx = lbo_basis(octahedron(), 4);
  std::istringstream sq("OFF\n4 2 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n");
  const SpectralBasis by = lbo_basis(parse_off(sq), 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p(4, 6);
  for (Eigen::Index i = 0; i < p.size(); ++i) p.data()[i] = u(rng);
  for (int i = 0; i < 4; ++i) p.row(i) /= p.row(i).sum();
  const FunctionalMap fm = functional_map(p, bx, by);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b) {
      double sum = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 6; ++j) sum += by.eigenfunctions(i, a) * by.areas.values[i] * p(i, j) * bx.eigenfunctions(j, b);
      CHECK(fm.C(a, b) == doctest::Approx(sum).epsilon(1e-12));
    }
  CHECK(fm.rank <= 4);
  CHECK_THROWS_AS(functional_map(Matrix::Ones(3, 6), bx, by), ContractError);
}

TEST_CASE("ortho_loss and total_loss") {
  CHECK(ortho_loss(FunctionalMap{Matrix::Zero(3, 5), 0}) == 0.0);
  Matrix j = Matrix::Zero(3, 5);
  j(0, 0) = j(1, 1) = 1.0;
  CHECK(ortho_loss(FunctionalMap{j, 2}) == 0.0);
  CHECK(ortho_loss(FunctionalMap{Matrix::Identity(2, 2), 1}) == 1.0);

  CHECK(total_loss(0.0, 0.0) == 0.0);
  CHECK(total_loss(0.002, 0.5) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(total_loss(7.0, 0.5, 0.0, 3.0) == 1.5);
}
