#pragma once

#include <Eigen/Core>

namespace scsvm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace scsvm
