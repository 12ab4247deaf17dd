#include "fixtures.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "whkit/generators.hpp"

namespace whkit::testing {

SurfaceGraph chain(const std::vector<double>& xs) {
  std::vector<Vec3> coords;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    coords.emplace_back(xs[i], 0.0, 0.0);
    if (i > 0) pairs.emplace_back(i - 1, i);
  }
  return SurfaceGraph(coords, pairs);
}

SurfaceGraph lattice(std::size_t rows, std::size_t cols) {
  std::vector<Vec3> coords;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      coords.emplace_back(double(c), double(r), 0.0);
      const std::size_t v = r * cols + c;
      if (c + 1 < cols) pairs.emplace_back(v, v + 1);
      if (r + 1 < rows) pairs.emplace_back(v, v + cols);
    }
  }
  return SurfaceGraph(coords, pairs);
}

Matrix floyd_warshall(const WeightedGraph& graph) {
  const std::size_t n = graph.vertex_count();
  Matrix d = Matrix::Constant(n, n, kInfinity);
  for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;
  for (const Edge& e : graph.edges()) {
    d(e.u, e.v) = std::min(d(e.u, e.v), e.weight);
    d(e.v, e.u) = std::min(d(e.v, e.u), e.weight);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
  return d;
}

Matrix brute_force_threshold(const Matrix& distances, const std::vector<std::size_t>& boundary,
                             const std::vector<Vec3>& coords, double shortcut_factor) {
  const Eigen::Index n = distances.rows();
  Matrix k = Matrix::Constant(n, n, kInfinity);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (std::size_t b1 : boundary)
        for (std::size_t b2 : boundary)
          k(i, j) = std::min(k(i, j), distances(i, b1) + distances(j, b2) +
                                          shortcut_factor * (coords[b1] - coords[b2]).norm());
  return k;
}

TriangleMesh icosphere(int subdivisions) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  for (const Vec3& v : {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0), Vec3(0, -1, t), Vec3(0, 1, t),
                        Vec3(0, -1, -t), Vec3(0, 1, -t), Vec3(t, 0, -1), Vec3(t, 0, 1), Vec3(-t, 0, -1), Vec3(-t, 0, 1)})
    mesh.vertices.push_back(v.normalized());
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
    const auto mid = [&](std::size_t a, std::size_t b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
      return midpoint[key] = mesh.vertices.size() - 1;
    };
    std::vector<Face> faces;
    for (const Face& f : mesh.faces) {
      const std::size_t ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      faces.insert(faces.end(), {{f[0], ab, ca}, {f[1], bc, ab}, {f[2], ca, bc}, {ab, bc, ca}});
    }
    mesh.faces = std::move(faces);
  }
  return mesh;
}

RandomPartial random_partial_grid(std::size_t rows, std::size_t cols, int holes, std::uint64_t seed) {
  TriangleMesh mesh = gen_grid_with_defect(rows, cols, 1.0).mesh;
  SurfaceGraph full = mesh_graph(mesh);
  std::mt19937_64 rng(seed);
  const auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  for (;;) {
    std::vector<std::size_t> removed;
    for (int h = 0; h < holes; ++h) {
      const std::size_t height = pick(1, std::max<std::size_t>(1, rows / 4));
      const std::size_t width = pick(1, std::max<std::size_t>(1, cols / 4));
      const std::size_t r0 = pick(1, rows - 1 - height);
      const std::size_t c0 = pick(1, cols - 1 - width);
      for (std::size_t r = r0; r < r0 + height; ++r)
        for (std::size_t c = c0; c < c0 + width; ++c) removed.push_back(r * cols + c);
    }
    PartialSelection selection = PartialSelection::complement(rows * cols, removed);
    try {
      (void)induce_partial(full, selection);
    } catch (const std::exception&) {
      continue;
    }
    return RandomPartial{std::move(mesh), std::move(full), std::move(selection)};
  }
}

}  // namespace whkit::testing
