// freespace.hpp -- cavity-less pulsed dynamics: a trapped particle whose
// position is imprinted dispersively on free-space scattered light.
//
// The particle is a damped harmonic oscillator; the scattered field is
// collected in a rectangular temporal mode of length tau.  The amplitude
// quadrature of that mode passes through untouched (a QND probe), the phase
// quadrature accumulates the position record sqrt(4 Gamma) x(t), and the
// back-action of the measurement drives the momentum with the input
// amplitude quadrature at the same rate Gamma.  Unlike the cavity scheme
// there is no sideband selection: heralding on a detected photon of this
// mode prepares a state close to -- but not exactly -- a phonon addition.
#pragma once

#include <Eigen/Dense>

#include "qng/covariance.hpp"
#include "qng/params.hpp"

namespace qng::freespace {

/**
 * @brief Propagation matrix of the damped mechanical oscillator over (p, x),
 *        exp(A tau) with A = [[-gamma, -omega_m], [omega_m, 0]].
 *
 * One analytic form covers the underdamped, critically damped and
 * overdamped regimes (trigonometric / hyperbolic continuation in
 * Omega^2 = omega_m^2 - gamma^2/4).
 */
Eigen::Matrix2d mech_propagator(const FreeSpaceParams& p, double tau);

/// 4x4 pulse propagator over (p, Y_out, x, X_out): the damped rotation on
/// the mechanical slots, the identity on the output-mode slots.
Eigen::Matrix4d freespace_propagator(const FreeSpaceParams& p, double tau);

/**
 * @brief Covariance matrix over (p, Y_out, x, X_out) after a measurement
 *        pulse of length tau > 0, starting from the given mechanical state
 *        with vacuum input light.
 *
 * The amplitude quadrature stays vacuum, V(3,3) = 1/2 exactly; the phase
 * quadrature Y_out carries the time-integrated position record plus the
 * thermal and back-action noise filtered by the oscillator response.  The
 * result feeds the same click-conditioning machinery as the cavity output
 * (mode 1 = mechanics, mode 2 = detected light).
 */
QuadCM propagate_freespace(const FreeSpaceParams& p, double tau, const MechInit& init);

} // namespace qng::freespace
