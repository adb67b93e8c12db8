// exp_taylor.hpp -- Taylor coefficients of exp(quadratic form) in two or four
// complex variables.  These power-series coefficients are the algebraic
// backbone of every Fock-resolved quantity in the simulator: conditional
// Wigner functions, photon-number distributions and the truncated Fock-basis
// reference density matrix are all derivatives of such exponential
// generating functions at the origin.
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qng::math {

using cplx = std::complex<double>;

/**
 * @brief Scaled Taylor coefficients of F(s) = exp( 1/2 s^T A s + z^T s ) in
 *        two variables s = (s1, s2).
 *
 * Writing F = sum_{j,k} c_{jk} s1^j s2^k, the returned matrix holds the
 * factorially scaled values  chat_{jk} = sqrt(j! k!) c_{jk},  which stay
 * bounded for physical inputs where the raw c_{jk} would over/underflow.
 * A is symmetrized internally; only its symmetric part contributes.
 *
 * @param a     2x2 coefficient matrix of the quadratic form
 * @param z     linear coefficients
 * @param jmax  maximal power of s1 (inclusive)
 * @param kmax  maximal power of s2 (inclusive)
 * @return (jmax+1) x (kmax+1) matrix of chat_{jk}
 */
Eigen::MatrixXcd exp_taylor_2(const Eigen::Matrix2cd& a, const Eigen::Vector2cd& z,
                              int jmax, int kmax);

/**
 * @brief Scaled Taylor coefficients of F(s) = exp( 1/2 s^T R s ) in four
 *        variables, with independent per-variable cutoffs.
 *
 * Stores chat_k = sqrt(k1! k2! k3! k4!) c_k for all multi-indices k with
 * k_i <= cut_i.  Memory grows as prod(cut_i + 1); the caller controls the
 * cutoffs (they map onto Fock-space truncations).
 */
class ExpTaylor4 {
public:
    /**
     * @param r    4x4 coefficient matrix (symmetrized internally)
     * @param cut  per-variable maximal powers (inclusive)
     */
    ExpTaylor4(const Eigen::Matrix4cd& r, const std::array<int, 4>& cut);

    /// Scaled coefficient chat_{k1,k2,k3,k4}.
    cplx operator()(int k1, int k2, int k3, int k4) const {
        return data_[index(k1, k2, k3, k4)];
    }

    const std::array<int, 4>& cutoffs() const { return cut_; }

private:
    std::size_t index(int k1, int k2, int k3, int k4) const {
        return ((static_cast<std::size_t>(k1) * (cut_[1] + 1) + k2) * (cut_[2] + 1) + k3) *
                   (cut_[3] + 1) +
               k4;
    }

    std::array<int, 4> cut_;
    std::vector<cplx> data_;
};

} // namespace qng::math
