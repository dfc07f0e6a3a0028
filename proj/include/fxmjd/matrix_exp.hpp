#pragma once

#include <Eigen/Dense>

namespace fxmjd {

// Matrix exponential by Pade(13) with scaling and squaring (Higham 2005).
// Relative accuracy near machine precision for the small generators used here.
Eigen::MatrixXd matrix_exp(const Eigen::MatrixXd& a);

}  // namespace fxmjd
