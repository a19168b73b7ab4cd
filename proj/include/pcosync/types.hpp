#pragma once

#include <Eigen/Dense>

namespace pcosync {

using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

}  // namespace pcosync
