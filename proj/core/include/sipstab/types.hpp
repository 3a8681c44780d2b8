#pragma once

#include <Eigen/Core>

#include <limits>

namespace sipstab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace sipstab
