// runge_kutta.hpp -- adaptive Dormand-Prince 5(4) integrator for matrix- or
// vector-valued ordinary differential equations (real or complex).
#pragma once

#include <algorithm>
#include <cmath>

#include "qng/errors.hpp"

namespace qng::math {

/**
 * @brief Integrate dy/dt = f(t, y) from t0 to t1 with adaptive step size.
 *
 * Classic Dormand-Prince embedded 5(4) pair with PI-free step control.
 * The state may be any Eigen vector/matrix type supporting norm().
 *
 * @param y        in: initial condition, out: solution at t1
 * @param f        right-hand side, called as f(t, y) -> State
 * @param t0,t1    integration interval (t1 >= t0)
 * @param rtol     relative tolerance of the local error test
 * @param atol     absolute tolerance of the local error test
 * @param max_step optional upper bound on the step size (0 = unbounded);
 *                 used to resolve known fast oscillations in the drift
 */
template <typename State, typename Deriv>
void integrate_adaptive(State& y, Deriv&& f, double t0, double t1, double rtol = 1e-10,
                        double atol = 1e-12, double max_step = 0.0) {
    if (t1 < t0) throw NumericalError("integrate_adaptive: t1 < t0");
    const double span = t1 - t0;
    if (span == 0.0) return;
    if (max_step <= 0.0) max_step = span;

    double t = t0;
    double h = std::min(span / 100.0, max_step);

    State k1 = f(t, y);
    long steps = 0;
    while (t < t1) {
        if (++steps > 20'000'000)
            throw NumericalError("integrate_adaptive: step budget exhausted");
        h = std::min(h, t1 - t);

        const State k2 = f(t + h / 5.0, State(y + h * (1.0 / 5.0) * k1));
        const State k3 = f(t + 3.0 * h / 10.0, State(y + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2)));
        const State k4 = f(t + 4.0 * h / 5.0,
                           State(y + h * (44.0 / 45.0 * k1 - 56.0 / 15.0 * k2 + 32.0 / 9.0 * k3)));
        const State k5 =
            f(t + 8.0 * h / 9.0,
              State(y + h * (19372.0 / 6561.0 * k1 - 25360.0 / 2187.0 * k2 +
                             64448.0 / 6561.0 * k3 - 212.0 / 729.0 * k4)));
        const State k6 = f(t + h, State(y + h * (9017.0 / 3168.0 * k1 - 355.0 / 33.0 * k2 +
                                                 46732.0 / 5247.0 * k3 + 49.0 / 176.0 * k4 -
                                                 5103.0 / 18656.0 * k5)));
        const State y5 = y + h * (35.0 / 384.0 * k1 + 500.0 / 1113.0 * k3 + 125.0 / 192.0 * k4 -
                                  2187.0 / 6784.0 * k5 + 11.0 / 84.0 * k6);
        const State k7 = f(t + h, y5);
        // Difference between the 5th-order solution and the embedded
        // 4th-order one estimates the local error.
        const State err = h * ((35.0 / 384.0 - 5179.0 / 57600.0) * k1 +
                               (500.0 / 1113.0 - 7571.0 / 16695.0) * k3 +
                               (125.0 / 192.0 - 393.0 / 640.0) * k4 +
                               (-2187.0 / 6784.0 + 92097.0 / 339200.0) * k5 +
                               (11.0 / 84.0 - 187.0 / 2100.0) * k6 - (1.0 / 40.0) * k7);

        const double scale = atol + rtol * std::max(y.norm(), y5.norm());
        const double enorm = err.norm() / scale;
        if (enorm <= 1.0) {
            t += h;
            y = y5;
            k1 = k7; // first-same-as-last
        }
        const double factor =
            (enorm > 0.0) ? 0.9 * std::pow(enorm, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
        h = std::min(h, max_step);
        if (!(h > 0.0) || t + h == t)
            throw NumericalError("integrate_adaptive: step size underflow");
    }
}

} // namespace qng::math
