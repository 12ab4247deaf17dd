#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "whkit/geometry.hpp"

namespace whkit {

/// Axis-aligned rectangle in the unit parameter square [0,1]^2 of the roll;
/// u runs along the spiral, v across its width.
struct ParamRect {
  double u0 = 0, v0 = 0, u1 = 0, v1 = 0;
};

struct RollDefect {
  enum class Kind { none, hole, cut };
  Kind kind = Kind::none;
  ParamRect rect;

  /// "none", "hole:u0,v0,u1,v1" or "cut:u0,v0,u1,v1".
  static RollDefect parse(const std::string& text);
};

struct SwissRollSpec {
  std::size_t n = 2000;
  double stretch = 1.5;
  double noise_sigma = 0.0;
  RollDefect defect;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SwissRoll {
  PointCloud cloud;  // parameterization = (arclength along the spiral, stretch * width)
  BoundarySet boundary_hint;
};

/// Samples (t, w) uniformly on [1.5 pi, 4.5 pi] x [0, 21] minus the defect,
/// maps to (t cos t, stretch w, t sin t) and adds isotropic Gaussian noise.
/// The boundary hint holds samples within one nominal spacing of the defect
/// or the outer rim, measured in ground-truth coordinates.
SwissRoll gen_swiss_roll(const SwissRollSpec& spec);

/// Inclusive block of grid vertices (row/column indices) to delete.
struct GridDefect {
  std::size_t row0 = 0, col0 = 0, row1 = 0, col1 = 0;

  /// "r0,c0,r1,c1"
  static GridDefect parse(const std::string& text);
};

struct Grid {
  TriangleMesh mesh;
  /// Indices into the full rows x cols grid that survived the defect.
  std::vector<std::size_t> kept;
};

/// rows x cols planar grid in the z = 0 plane, vertex (r, c) at
/// (c * spacing, r * spacing), each quad split along its (r,c)-(r+1,c+1)
/// diagonal. Defect vertices, their faces and any vertex left without a face
/// are removed.
Grid gen_grid_with_defect(std::size_t rows, std::size_t cols, double spacing,
                          std::optional<GridDefect> defect = std::nullopt);

}  // namespace whkit
