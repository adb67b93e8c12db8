// math_special.cpp -- implementation of the special-function toolbox.

#include "qng/math/special.hpp"

#include <cmath>
#include <vector>

#include "qng/errors.hpp"

namespace qng::math {

double factorial(int n) {
    if (n < 0) throw NumericalError("factorial: negative argument");
    if (n > 170) throw NumericalError("factorial: overflow, use log_factorial");
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int k = 1; k <= 170; ++k) t[k] = t[k - 1] * k;
        return t;
    }();
    return table[n];
}

double log_factorial(int n) {
    if (n < 0) throw NumericalError("log_factorial: negative argument");
    return std::lgamma(static_cast<double>(n) + 1.0);
}

double sqrt_factorial_ratio(int a, int b) {
    return std::exp(0.5 * (log_factorial(a) - log_factorial(b)));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
}

double laguerre(int n, double a, double x) {
    if (n < 0) return 0.0;
    if (n == 0) return 1.0;
    double lkm1 = 1.0;           // L_0
    double lk = 1.0 + a - x;     // L_1
    for (int k = 1; k < n; ++k) {
        const double lkp1 = ((2.0 * k + 1.0 + a - x) * lk - (k + a) * lkm1) / (k + 1.0);
        lkm1 = lk;
        lk = lkp1;
    }
    return lk;
}

double laguerre_derivative(int n, double a, double x) {
    if (n <= 0) return 0.0;
    return -laguerre(n - 1, a + 1.0, x);
}

cplx displaced_fock(int n, int m, cplx alpha) {
    if (n < 0 || m < 0) throw NumericalError("displaced_fock: negative index");
    const double a2 = std::norm(alpha);
    const double gauss = std::exp(-0.5 * a2);
    if (n >= m) {
        // <n|D|m> = sqrt(m!/n!) alpha^{n-m} e^{-|a|^2/2} L_m^{(n-m)}(|a|^2)
        return sqrt_factorial_ratio(m, n) * std::pow(alpha, n - m) * gauss *
               laguerre(m, static_cast<double>(n - m), a2);
    }
    // <n|D|m> = sqrt(n!/m!) (-conj(alpha))^{m-n} e^{-|a|^2/2} L_n^{(m-n)}(|a|^2)
    return sqrt_factorial_ratio(n, m) * std::pow(-std::conj(alpha), m - n) * gauss *
           laguerre(n, static_cast<double>(m - n), a2);
}

Eigen::MatrixXcd squeeze_matrix(int rows, int cols, cplx z) {
    if (rows <= 0 || cols <= 0) throw NumericalError("squeeze_matrix: empty block");
    const double r = std::abs(z);
    if (r == 0.0) {
        return Eigen::MatrixXcd::Identity(rows, cols);
    }
    const cplx phase = z / r;
    const double ch = std::cosh(r);
    const double sh = std::sinh(r);
    const double th = sh / ch;

    // Extra rows absorb the upward reference S_{n+1,m} in the column
    // recurrence, so the returned block carries no truncation loss.
    const int nr = rows + cols + 1;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(nr, cols);

    // First column: squeezed vacuum, even rows only.
    s(0, 0) = 1.0 / std::sqrt(ch);
    for (int n = 1; n + 1 < nr; n += 2) {
        s(n + 1, 0) = -phase * th * std::sqrt(n / (n + 1.0)) * s(n - 1, 0);
    }
    // Advance columns: sqrt(m+1) S_{n,m+1} =
    //     cosh r sqrt(n) S_{n-1,m} + e^{-i theta} sinh r sqrt(n+1) S_{n+1,m}.
    for (int m = 0; m + 1 < cols; ++m) {
        for (int n = 0; n + 1 < nr; ++n) {
            cplx acc = std::conj(phase) * sh * std::sqrt(n + 1.0) * s(n + 1, m);
            if (n > 0) acc += ch * std::sqrt(static_cast<double>(n)) * s(n - 1, m);
            s(n, m + 1) = acc / std::sqrt(m + 1.0);
        }
    }
    return s.topLeftCorner(rows, cols);
}

double fock_wigner(int n, cplx alpha) {
    const double a2 = std::norm(alpha);
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return (2.0 / M_PI) * sign * std::exp(-2.0 * a2) * laguerre(n, 0.0, 4.0 * a2);
}

} // namespace qng::math
