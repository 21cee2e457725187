#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace grfgov {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Pivot closer than this to the point mass is treated as degenerate.
inline constexpr double kDegeneratePivotTol = 1e-9;

class DegeneratePivotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChartMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace grfgov
