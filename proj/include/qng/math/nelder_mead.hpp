// nelder_mead.hpp -- derivative-free simplex minimizer used by the
// witness-threshold optimization.
#pragma once

#include <functional>

#include <Eigen/Dense>

namespace qng::math {

/// Result of a simplex minimization.
struct SimplexResult {
    Eigen::VectorXd x;      ///< best point found
    double value = 0.0;     ///< objective at x
    int iterations = 0;     ///< iterations spent
    bool converged = false; ///< simplex collapsed below the tolerances
};

/**
 * @brief Nelder-Mead downhill-simplex minimization of f.
 *
 * Standard reflection/expansion/contraction/shrink moves.  Convergence is
 * declared when both the simplex diameter and the spread of function
 * values fall below the given tolerances.
 *
 * @param f        objective to minimize
 * @param x0       starting point
 * @param scale    initial simplex edge length per coordinate
 * @param ftol     tolerance on the value spread
 * @param xtol     tolerance on the simplex diameter
 * @param max_iter iteration budget
 */
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, double scale = 0.25, double ftol = 1e-12,
                          double xtol = 1e-10, int max_iter = 2000);

} // namespace qng::math
