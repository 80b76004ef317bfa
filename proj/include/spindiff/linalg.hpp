#pragma once

#include <Eigen/Dense>

namespace spindiff {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Execution policy for the hot kernels. Parallel falls back to serial
/// when the build has no OpenMP support.
enum class Exec { Serial, Parallel };

} // namespace spindiff
