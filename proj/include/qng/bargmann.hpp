// bargmann.hpp -- coherent-state (Bargmann) kernel of a Gaussian state.
//
// For an N-mode zero-mean Gaussian state rho with ladder covariance V the
// coherent-state matrix elements have the closed form
//
//   <beta| rho |alpha> = P0 exp( -|s|^2/2 + 1/2 s^T Rt s ),
//   s  = (beta_1^*, .., beta_N^*, alpha_1, .., alpha_N),
//   Rt = X (2V - I) (2V + I)^{-1},      X = [[0, I], [I, 0]],
//   P0 = 2^N / sqrt(det(2V + I))        ( = <0|rho|0> ).
//
// Every Fock-resolved quantity in the simulator (conditional Wigner
// functions, photon statistics, truncated density matrices) is obtained by
// differentiating this generating function at s = 0.
#pragma once

#include <Eigen/Dense>

#include "qng/covariance.hpp"

namespace qng {

/// Kernel data of a two-mode Gaussian state (mechanics = mode 0,
/// detected optical mode = mode 1).
struct BargmannKernel {
    double p0 = 0.0; ///< vacuum matrix element <00|rho|00>
    Mat4c rt;        ///< kernel matrix over (beta1*, beta2*, alpha1, alpha2)
    /// Blocks of the same matrix re-ordered per mode,
    /// s_perm = (beta1*, alpha1, beta2*, alpha2):
    Mat2c mm; ///< mechanical-mechanical block
    Mat2c mc; ///< mechanical-optical block
    Mat2c cm; ///< optical-mechanical block (= mc^T)
    Mat2c cc; ///< optical-optical block
};

/// Kernel data of a single-mode Gaussian state.
struct BargmannKernelSingle {
    double p0 = 0.0; ///< <0|rho|0>
    Mat2c r;         ///< kernel matrix over (beta*, alpha)
};

/// Build the two-mode kernel from a ladder covariance matrix.
BargmannKernel bargmann_kernel(const FieldCM& two_mode);

/// Build the single-mode kernel from a 2x2 ladder covariance block
/// (ordering (a^dag, a), i.e. V(0,0) = n + 1/2).
BargmannKernelSingle bargmann_kernel_single(const Mat2c& v1);

/**
 * @brief Truncated Fock-basis density matrix of a single-mode Gaussian
 *        state: rho_{nm} for 0 <= n, m <= nmax, exact at every order.
 */
Eigen::MatrixXcd gaussian_fock_matrix(const Mat2c& v1, int nmax);

/// Diagonal of gaussian_fock_matrix: exact photon-number probabilities of a
/// single-mode Gaussian state.
Eigen::VectorXd gaussian_fock_populations(const Mat2c& v1, int nmax);

} // namespace qng
