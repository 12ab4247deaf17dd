#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <limits>

namespace whkit {

/// Dense row-major matrix, the in-memory layout of the WHM1 file format.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace whkit
