// special.hpp -- special functions used across the simulator: factorials,
// generalized Laguerre polynomials, Fock-basis matrix elements of the
// displacement and squeeze operators, and Fock-state Wigner functions.
#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qng::math {

using cplx = std::complex<double>;

/// n! as a double (exact up to n = 170, then overflow -> throws).
double factorial(int n);

/// log(n!) valid for any n >= 0.
double log_factorial(int n);

/// sqrt(a! / b!) computed in log space to avoid overflow.
double sqrt_factorial_ratio(int a, int b);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

/**
 * @brief Generalized Laguerre polynomial L_n^{(a)}(x).
 *
 * Uses the stable three-term recurrence
 *   (k+1) L_{k+1}^{(a)} = (2k+1+a-x) L_k^{(a)} - (k+a) L_{k-1}^{(a)},
 * valid for any real order a (only k+1 appears as a divisor).
 */
double laguerre(int n, double a, double x);

/// Derivative d/dx L_n^{(a)}(x) = -L_{n-1}^{(a+1)}(x)  (0 for n = 0).
double laguerre_derivative(int n, double a, double x);

/**
 * @brief Fock-basis matrix element of the displacement operator,
 *        <n| D(alpha) |m>  with  D(alpha) = exp(alpha a^dag - alpha^* a).
 *
 * Closed form via associated Laguerre polynomials; exact for all n, m >= 0.
 */
cplx displaced_fock(int n, int m, cplx alpha);

/**
 * @brief Fock-basis matrix of the squeeze operator S(z),
 *        S(z) = exp[ (z^* a^2 - z a^dag^2) / 2 ],  z = r e^{i theta}.
 *
 * Builds the (rows x cols) block <n| S |m> with 0 <= n < rows,
 * 0 <= m < cols.  The recurrence is seeded from the first column
 *   S_{n+1,0} = -e^{i theta} tanh(r) sqrt(n/(n+1)) S_{n-1,0},
 *   S_{0,0}   = sqrt(sech r),
 * and columns are advanced with
 *   sqrt(m+1) S_{n,m+1} = cosh(r) sqrt(n) S_{n-1,m}
 *                       + e^{-i theta} sinh(r) sqrt(n+1) S_{n+1,m}.
 * Internally extra rows are kept so the requested block is free of
 * truncation loss from the upward reference in the column recurrence.
 */
Eigen::MatrixXcd squeeze_matrix(int rows, int cols, cplx z);

/**
 * @brief Wigner function of the Fock state |n> at phase-space point alpha,
 *        W_n(alpha) = (2/pi) (-1)^n exp(-2|alpha|^2) L_n(4|alpha|^2),
 * normalized so that  int W_n d^2alpha = 1.
 */
double fock_wigner(int n, cplx alpha);

} // namespace qng::math
