// cavity.hpp -- pulsed cavity optomechanics in the resolved-sideband,
// rotating-wave regime.
//
// The linearized quantum Langevin equations couple the mechanical mode b to
// the cavity mode a.  A blue-detuned pulse realizes a two-mode-squeezing
// interaction (entangling b with the output light, heralding phonon
// addition), a red-detuned pulse a beam-splitter interaction (mapping b onto
// the light, enabling phonon subtraction and state readout).  The detected
// object is a single temporal mode A of the cavity output field,
//     A = int_0^tau f_out(s) a_out(s) ds,     a_out = sqrt(2 kappa) a - a_in,
// whose shape f_out rises with the optomechanical transfer.  This module
// produces the joint Gaussian covariance of (b, A) after a pulse, by two
// independent routes: an adaptive Lyapunov integration of the augmented
// second-moment equations, and direct quadrature of the formal input-output
// solution.  Both must agree entrywise; the tests enforce that.
#pragma once

#include <functional>

#include "qng/covariance.hpp"
#include "qng/params.hpp"

namespace qng::cavity {

/**
 * @brief Drift matrix of the rotating-frame dynamics over
 *        u = (b^dag, a^dag, b, a).
 *
 * Blue sideband:  d/dt b^dag = -gamma b^dag - i g a + noise,
 *                 d/dt a^dag = -kappa a^dag - i g b + noise;
 * red sideband:   d/dt b^dag = -gamma b^dag - i g a^dag + noise,
 *                 d/dt a^dag = -kappa a^dag - i g b^dag + noise;
 * plus the conjugate rows.
 */
Mat4c drift(const CavityParams& p);

/// Heisenberg propagator M(t) = exp(drift t).
Mat4c propagator(const CavityParams& p, double t);

/**
 * @brief Squared interaction rate G^2 = +-g^2 + (kappa - gamma)^2 / 4
 *        (+ blue, - red).  Negative values mark the oscillatory
 *        (swap) regime of the beam-splitter branch.
 */
double interaction_rate_sq(const CavityParams& p);

/// cosh(G t) continued analytically through G^2 <= 0.
double gcosh(double g2, double t);

/// sinh(G t)/G continued analytically through G^2 <= 0 (equals t at G = 0).
double gsinch(double g2, double t);

/**
 * @brief Temporal mode of the detected output pulse.
 *
 * The unnormalized shape is h(s) = e^{-(gamma+kappa)s/2} sinh(G s)/G; the
 * detected mode is f_out = h / ||h||_2 (the coupling g cancels between the
 * textbook prefactor and the gain normalization, so the shape is well
 * defined even at g = 0, where the mode carries no signal and the
 * degenerate flag is raised).
 */
struct TemporalMode {
    double tau = 0.0;       ///< pulse length
    double gain = 1.0;      ///< G_+- = 1 + 2 kappa g^2 int h^2 ds
    bool degenerate = false; ///< g = 0: the mode shape carries no signal
    std::function<double(double)> f; ///< normalized shape on [0, tau]
};

TemporalMode output_mode(const CavityParams& p, double tau);

/// Gain of the output temporal mode alone.
double mode_gain(const CavityParams& p, double tau);

/**
 * @brief Joint ladder covariance of (mechanics, detected output mode) after
 *        one pulse, starting from the mechanical covariance mech_init
 *        (2x2, ordering (b^dag, b)) with the cavity in vacuum.
 *
 * Integrates the 6x6 second-moment (Lyapunov) equations of
 * (b^dag, a^dag, A^dag, b, a, A) with the mode accumulator driven by
 * dA/dt = f_out(t) (sqrt(2 kappa) a - a_in).
 */
FieldCM propagate_pulse(const Mat2c& mech_init, const CavityParams& p, double tau);

/**
 * @brief Same covariance by explicit quadrature of the input-output
 *        solution u(t) = M(t) u(0) + int M(t-s) N n(s) ds.
 *
 * Independent of the Lyapunov route (no shared integrator); serves as the
 * first-principles cross-check of propagate_pulse.
 */
FieldCM covariance_by_quadrature(const Mat2c& mech_init, const CavityParams& p, double tau);

} // namespace qng::cavity
