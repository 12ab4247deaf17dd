#pragma once

// Shared fixtures and independent reference computations for the test suites.
// Nothing here calls the library routine it is used to check.

#include <cstdint>
#include <vector>

#include "whkit/consistency.hpp"
#include "whkit/geometry.hpp"
#include "whkit/types.hpp"

namespace whkit::testing {

/// Points on the x axis joined in order.
SurfaceGraph chain(const std::vector<double>& xs);

/// rows x cols lattice with unit spacing and only axis-aligned edges.
SurfaceGraph lattice(std::size_t rows, std::size_t cols);

/// Dense O(n^3) Floyd-Warshall on the edge list.
Matrix floyd_warshall(const WeightedGraph& graph);

/// Quadruple loop over (i, j, B1, B2) with no factorisation.
Matrix brute_force_threshold(const Matrix& distances, const std::vector<std::size_t>& boundary,
                             const std::vector<Vec3>& coords, double shortcut_factor);

/// Subdivided icosahedron projected onto the unit sphere.
TriangleMesh icosphere(int subdivisions);

/// Full triangulated grid plus a selection with `holes` random rectangular
/// blocks removed; retries until the induced partial graph is connected.
struct RandomPartial {
  TriangleMesh full_mesh;
  SurfaceGraph full;
  PartialSelection selection;
};
RandomPartial random_partial_grid(std::size_t rows, std::size_t cols, int holes, std::uint64_t seed);

}  // namespace whkit::testing
