// rates.hpp -- conversion from physical trap / particle / cavity settings
// to the dimensionless rates used by the simulator.
//
// A levitated dielectric nanoparticle in a tweezer focus oscillates at a
// frequency set by the optical gradient; coherent scattering of tweezer
// photons into a cavity mode yields the optomechanical coupling, and in
// free space the random recoil of scattered photons sets the measurement
// back-action rate.  All outputs are angular rates (rad/s).
#pragma once

#include <optional>

#include "qng/params.hpp"

namespace qng::rates {

/// Dielectric particle in the trap.
struct ParticleSpec {
    double radius = 0.0;       ///< [m]
    double density = 0.0;      ///< [kg/m^3]
    double permittivity = 0.0; ///< relative permittivity (> 1)
};

/// Trapping beam at the focus.
struct TweezerSpec {
    double power = 0.0;         ///< [W]
    double waist = 0.0;         ///< [m]
    double cross_section = 0.0; ///< effective focal area [m^2]; the peak
                                ///< field is sqrt(4 P / (pi eps0 c A))
    double wavelength = 0.0;    ///< [m]; needed for recoil (free space)
};

/// Optical cavity collecting the scattered light.
struct CavitySpec {
    double frequency = 0.0; ///< [rad/s]
    double waist = 0.0;     ///< [m]
    double length = 0.0;    ///< [m]
};

/// Derived mechanical and optomechanical rates.
struct PhysicalRates {
    double omega_m = 0.0;  ///< trap frequency [rad/s]
    double g = 0.0;        ///< cavity optomechanical coupling [rad/s] (cavity setups)
    double gamma_ba = 0.0; ///< photon-recoil back-action rate [rad/s] (free space)
    double mass = 0.0;     ///< particle mass [kg]
    double x_zpf = 0.0;    ///< zero-point motion [m]
};

/**
 * @brief Trap frequency plus either the cavity coupling (cavity block
 *        given) or the free-space recoil rate (no cavity block).
 *
 * Trap: omega_m = sqrt(eps_c / (rho W_t^2)) sqrt(4 P_t / (pi c A)) with
 * eps_c = 3 (eps - 1)/(eps + 2) -- the gradient-force spring of the focal
 * intensity profile (the vacuum permittivity of the field amplitude and
 * the particle volume of the polarizability cancel).
 *
 * Cavity coupling: the tweezer field alpha E_t, the per-photon cavity
 * field sqrt(hbar omega_c / (2 eps0 V_c)) with V_c = pi W_c^2 L_c / 4,
 * the photon wave vector k = omega_c / c from the field gradient, and the
 * zero-point motion combine into
 *   g = eps_c V sqrt(4 P_t/(pi c A)) sqrt(omega_c/(2 hbar V_c)) k x_zpf.
 *
 * Free space: the recoil rate is the scattered-photon flux times the
 * single-photon recoil energy over the phonon energy, projected on the
 * axis orthogonal to the polarization (factor 7/15):
 *   Gamma = (7/15) (P_scat / (hbar omega_L)) (hbar k^2 / (2 m omega_m)),
 *   P_scat = omega_L^4 alpha^2 E_0^2 / (12 pi eps0 c^3).
 */
PhysicalRates derive_physical_rates(const ParticleSpec& particle, const TweezerSpec& tweezer,
                                    const std::optional<CavitySpec>& cavity = {});

/// Dimensionless pulse parameters (rates in units of kappa) for a cavity
/// setup; damping and occupation are passed through unchanged.
CavityParams to_cavity_params(const PhysicalRates& rates, double kappa, double gamma_over_kappa,
                              double nbar, Sideband sideband);

/// Dimensionless free-space parameters (rates in units of omega_m).
FreeSpaceParams to_freespace_params(const PhysicalRates& rates, double gamma_over_omega,
                                    double nbar);

/// Reference configuration of a silica particle in a cavity, reproducing
/// the published cavity-experiment regime (trap at 2 pi x 190 kHz and
/// coupling 2 pi x 60 kHz against a 2 pi x 96 kHz cavity linewidth).
void cavity_reference_config(ParticleSpec& particle, TweezerSpec& tweezer, CavitySpec& cavity);

/// Reference free-space configuration (trap at 2 pi x 73.25 kHz, recoil
/// rate 2 pi x 5 kHz).
void freespace_reference_config(ParticleSpec& particle, TweezerSpec& tweezer);

} // namespace qng::rates
