// fullqle.hpp -- pulsed cavity optomechanics beyond the rotating-wave
// approximation.
//
// Keeping the counter-rotating interaction terms, the linearized dynamics in
// the doubly rotating frame is driven by the time-dependent Hamiltonian
//   H(t) = -g(t) [ a b + a^dag b^dag + a b^dag e^{+2i w_m t}
//                                    + a^dag b e^{-2i w_m t} ]   (blue)
//   H(t) = -g(t) [ a b^dag + a^dag b + a b e^{-2i w_m t}
//                                    + a^dag b^dag e^{+2i w_m t} ]  (red),
// so the drift matrix oscillates at twice the mechanical frequency and the
// covariance propagation no longer has a closed form.  This engine
// integrates the augmented 6x6 second-moment equations with the full drift,
// supports a finite switch-on ramp of the coupling, and can project the
// output either on the rotating-wave temporal mode or on a numerically
// matched mode extracted from the transition matrix.  In the limit
// w_m >> kappa, g it must converge to the rotating-wave engine; the tests
// enforce the convergence rate.
#pragma once

#include <functional>

#include "qng/covariance.hpp"
#include "qng/params.hpp"

namespace qng::fullqle {

/// Coupling at time t: constant, or rising as g (1 - e^{-kappa t}).
double coupling_at(const FullQleParams& p, double t);

/// Time-dependent 4x4 drift over (b^dag, a^dag, b, a), including the
/// counter-rotating couplings at e^{+-2i w_m t}.
Mat4c drift(const FullQleParams& p, double t);

/**
 * @brief Heuristic: is the rotating-wave engine adequate?  The sideband
 *        resolution w_m / kappa and the coupling strength g / kappa both
 *        control the size of the neglected terms; outside w_m >= 4 kappa
 *        and g <= 0.1 kappa the full engine is recommended.
 */
bool rwa_sufficient(const FullQleParams& p);

/**
 * @brief Normalized real temporal mode the engine projects the output on.
 *
 * RotatingWave: the closed-form mode of the same sideband.  Matched: the
 * amplitude with which the mechanical signal reaches the intracavity field,
 * extracted from the transition matrix Phi(s) of the full drift, reduced to
 * a real shape by the optimal global phase and normalized.
 */
std::function<double(double)> output_shape(const FullQleParams& p, double tau);

/**
 * @brief Joint ladder covariance of (mechanics, detected output mode) after
 *        one pulse under the full dynamics; same contract as the
 *        rotating-wave propagate_pulse.
 */
FieldCM propagate_pulse(const Mat2c& mech_init, const FullQleParams& p, double tau);

} // namespace qng::fullqle
