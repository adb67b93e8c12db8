// gauss_legendre.hpp -- adaptive Gauss-Legendre quadrature in one and two
// dimensions, for scalar, complex and fixed-size Eigen-matrix integrands.
#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

#include <Eigen/Dense>

#include "qng/errors.hpp"

namespace qng::math {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre recurrence.
struct QuadRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    explicit QuadRule(int n) : nodes(n), weights(n) {
        for (int i = 0; i < n; ++i) {
            // Chebyshev-like initial guess, then Newton refinement.
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / dp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes(i) = x;
            weights(i) = 2.0 / ((1.0 - x * x) * dp * dp);
        }
    }

    /// Shared 15-point rule used by the adaptive drivers.
    static const QuadRule& panel15() {
        static const QuadRule rule(15);
        return rule;
    }
};

namespace detail {

template <typename T>
double quad_norm(const T& v) {
    if constexpr (std::is_arithmetic_v<T>) {
        return std::abs(v);
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return std::abs(v);
    } else {
        return v.norm();
    }
}

template <typename F>
auto panel_integral_1d(F&& f, double a, double b) {
    const QuadRule& r = QuadRule::panel15();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    auto acc = f(mid + half * r.nodes(0));
    acc = acc * (half * r.weights(0));
    for (int i = 1; i < r.nodes.size(); ++i) {
        acc = acc + f(mid + half * r.nodes(i)) * (half * r.weights(i));
    }
    return acc;
}

template <typename F, typename T>
T adaptive_1d(F&& f, double a, double b, const T& coarse, double tol, int depth) {
    const double mid = 0.5 * (a + b);
    const T left = panel_integral_1d(f, a, mid);
    const T right = panel_integral_1d(f, mid, b);
    const T fine = left + right;
    if (quad_norm<T>(fine - coarse) <= tol) return fine;
    if (depth >= 48)
        throw NumericalError("adaptive quadrature: maximal bisection depth reached");
    return adaptive_1d(f, a, mid, left, 0.5 * tol, depth + 1) +
           adaptive_1d(f, mid, b, right, 0.5 * tol, depth + 1);
}

template <typename F>
auto panel_integral_2d(F&& f, double ax, double bx, double ay, double by) {
    const QuadRule& r = QuadRule::panel15();
    const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
    const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
    auto acc = f(mx + hx * r.nodes(0), my + hy * r.nodes(0));
    acc = acc * (hx * r.weights(0) * hy * r.weights(0));
    for (int i = 0; i < r.nodes.size(); ++i) {
        for (int j = 0; j < r.nodes.size(); ++j) {
            if (i == 0 && j == 0) continue;
            acc = acc + f(mx + hx * r.nodes(i), my + hy * r.nodes(j)) *
                            (hx * r.weights(i) * hy * r.weights(j));
        }
    }
    return acc;
}

template <typename F, typename T>
T adaptive_2d(F&& f, double ax, double bx, double ay, double by, const T& coarse, double tol,
              int depth) {
    const double mx = 0.5 * (ax + bx), my = 0.5 * (ay + by);
    const T q11 = panel_integral_2d(f, ax, mx, ay, my);
    const T q12 = panel_integral_2d(f, ax, mx, my, by);
    const T q21 = panel_integral_2d(f, mx, bx, ay, my);
    const T q22 = panel_integral_2d(f, mx, bx, my, by);
    const T fine = q11 + q12 + q21 + q22;
    if (quad_norm<T>(fine - coarse) <= tol) return fine;
    if (depth >= 24)
        throw NumericalError("adaptive 2d quadrature: maximal subdivision depth reached");
    return adaptive_2d(f, ax, mx, ay, my, q11, 0.25 * tol, depth + 1) +
           adaptive_2d(f, ax, mx, my, by, q12, 0.25 * tol, depth + 1) +
           adaptive_2d(f, mx, bx, ay, my, q21, 0.25 * tol, depth + 1) +
           adaptive_2d(f, mx, bx, my, by, q22, 0.25 * tol, depth + 1);
}

} // namespace detail

/**
 * @brief Adaptive integral of f over [a, b] to absolute tolerance tol.
 *
 * Panels are 15-point Gauss-Legendre rules, bisected until the coarse/fine
 * estimates agree.  The integrand may return double, complex<double> or a
 * fixed-size Eigen matrix.
 */
template <typename F>
auto integrate(F&& f, double a, double b, double tol = 1e-11) {
    using T = std::decay_t<decltype(f(a))>;
    if (a == b) return T(f(a) * 0.0);
    const T coarse = detail::panel_integral_1d(f, a, b);
    return detail::adaptive_1d<F, T>(std::forward<F>(f), a, b, coarse, tol, 0);
}

/**
 * @brief Adaptive integral of f(x, y) over the rectangle
 *        [ax, bx] x [ay, by] to absolute tolerance tol.
 */
template <typename F>
auto integrate2d(F&& f, double ax, double bx, double ay, double by, double tol = 1e-10) {
    using T = std::decay_t<decltype(f(ax, ay))>;
    if (ax == bx || ay == by) return T(f(ax, ay) * 0.0);
    const T coarse = detail::panel_integral_2d(f, ax, bx, ay, by);
    return detail::adaptive_2d<F, T>(std::forward<F>(f), ax, bx, ay, by, coarse, tol, 0);
}

} // namespace qng::math
