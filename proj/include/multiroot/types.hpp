#pragma once

#include <Eigen/Dense>

namespace multiroot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

} // namespace multiroot
