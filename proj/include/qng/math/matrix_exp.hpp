// matrix_exp.hpp -- matrix exponential used for Heisenberg-picture
// propagators of the linear quantum Langevin dynamics.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

namespace qng::math {

/// exp(A) of a dense complex matrix (scaling-and-squaring with Pade
/// approximants, as provided by Eigen's matrix-function module).
inline Eigen::MatrixXcd expm(const Eigen::MatrixXcd& a) { return a.exp(); }

/// exp(A) of a dense real matrix.
inline Eigen::MatrixXd expm(const Eigen::MatrixXd& a) { return a.exp(); }

} // namespace qng::math
