#include "qng/rates.hpp"

#include <cmath>
#include <numbers>

#include "qng/errors.hpp"

namespace qng::rates {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kC = 299792458.0;          // speed of light [m/s]
constexpr double kHbar = 1.054571817e-34;   // reduced Planck constant [J s]
constexpr double kEps0 = 8.8541878128e-12;  // vacuum permittivity [F/m]

void require_positive(double value, const char* name) {
    if (!(value > 0.0)) {
        throw ConfigError(std::string("physical rate input '") + name + "' must be positive");
    }
}

} // namespace

PhysicalRates derive_physical_rates(const ParticleSpec& particle, const TweezerSpec& tweezer,
                                    const std::optional<CavitySpec>& cavity) {
    require_positive(particle.radius, "particle.radius");
    require_positive(particle.density, "particle.density");
    require_positive(particle.permittivity, "particle.permittivity");
    if (!(particle.permittivity > 1.0)) {
        throw ConfigError("particle.permittivity must exceed 1 (vacuum) for an attractive trap");
    }
    require_positive(tweezer.power, "tweezer.power");
    require_positive(tweezer.waist, "tweezer.waist");
    require_positive(tweezer.cross_section, "tweezer.cross_section");

    // Clausius-Mossotti contrast; the polarizability is alpha = eps0 * eps_c * V.
    const double eps_c =
        3.0 * (particle.permittivity - 1.0) / (particle.permittivity + 2.0);
    const double volume = (4.0 / 3.0) * kPi * std::pow(particle.radius, 3);
    const double mass = particle.density * volume;

    PhysicalRates out;
    out.mass = mass;

    // Gradient-trap frequency.  4 P / (pi c A) is eps0 E_0^2 (twice the
    // focal energy density), and the spring constant of the Gaussian
    // intensity profile is alpha E_0^2 / W_t^2, so both eps0 and the
    // particle volume cancel from omega_m^2 = k_spring / m.
    const double flux = 4.0 * tweezer.power / (kPi * kC * tweezer.cross_section);
    out.omega_m = std::sqrt(eps_c / (particle.density * tweezer.waist * tweezer.waist)) *
                  std::sqrt(flux);
    out.x_zpf = std::sqrt(kHbar / (2.0 * mass * out.omega_m));

    if (cavity.has_value()) {
        require_positive(cavity->frequency, "cavity.frequency");
        require_positive(cavity->waist, "cavity.waist");
        require_positive(cavity->length, "cavity.length");

        // Coherent scattering of tweezer photons into the cavity mode:
        // the classical tweezer field interferes with the per-photon
        // cavity field over the particle polarizability.  The field
        // gradient contributes the photon wave vector k = omega_c / c,
        // and the phonon leg contributes the zero-point motion.
        const double mode_volume =
            kPi * cavity->waist * cavity->waist * cavity->length / 4.0;
        const double field_rate = eps_c * volume * std::sqrt(flux) *
                                  std::sqrt(cavity->frequency / (2.0 * kHbar * mode_volume));
        const double k = cavity->frequency / kC;
        out.g = field_rate * k * out.x_zpf;
    } else {
        require_positive(tweezer.wavelength, "tweezer.wavelength");

        // Photon-recoil back-action: dipole-scattered photon flux times
        // the single-photon recoil energy per phonon quantum, projected
        // on the motional axis orthogonal to the polarization (7/15).
        const double k = 2.0 * kPi / tweezer.wavelength;
        const double omega_l = kC * k;
        const double alpha = kEps0 * eps_c * volume;
        const double e0_sq = 4.0 * tweezer.power /
                             (kPi * kEps0 * kC * tweezer.cross_section);
        const double p_scat = std::pow(omega_l, 4) * alpha * alpha * e0_sq /
                              (12.0 * kPi * kEps0 * kC * kC * kC);
        const double photon_flux = p_scat / (kHbar * omega_l);
        out.gamma_ba = (7.0 / 15.0) * photon_flux * kHbar * k * k /
                       (2.0 * mass * out.omega_m);
    }
    return out;
}

CavityParams to_cavity_params(const PhysicalRates& rates, double kappa, double gamma_over_kappa,
                              double nbar, Sideband sideband) {
    if (!(rates.g > 0.0)) {
        throw ConfigError("cavity rates requested but the configuration has no cavity block");
    }
    require_positive(kappa, "kappa");
    CavityParams p;
    p.g = rates.g / kappa;
    p.kappa = 1.0;
    p.gamma = gamma_over_kappa;
    p.nbar = nbar;
    p.sideband = sideband;
    p.validate();
    return p;
}

FreeSpaceParams to_freespace_params(const PhysicalRates& rates, double gamma_over_omega,
                                    double nbar) {
    if (!(rates.gamma_ba > 0.0)) {
        throw ConfigError("free-space rates requested but the rates were derived for a cavity setup");
    }
    FreeSpaceParams p;
    p.omega_m = 1.0;
    p.gamma = gamma_over_omega;
    p.nbar = nbar;
    p.meas_rate = rates.gamma_ba / rates.omega_m;
    p.validate();
    return p;
}

void cavity_reference_config(ParticleSpec& particle, TweezerSpec& tweezer, CavitySpec& cavity) {
    // Silica sphere in a 1064 nm standing-wave cavity, chosen to land on
    // the published operating point (trap 2 pi x 190 kHz, coupling
    // 2 pi x 60 kHz, linewidth 2 pi x 96 kHz).
    particle.radius = 44.85e-9;
    particle.density = 1850.0;
    particle.permittivity = 2.1;
    tweezer.power = 0.1;
    tweezer.waist = 0.6e-6;
    tweezer.cross_section = tweezer.waist * tweezer.waist;
    tweezer.wavelength = 1064.0e-9;
    cavity.frequency = 2.0 * kPi * kC / 1064.0e-9;
    cavity.waist = 41.1e-6;
    cavity.length = 1.07e-2;
}

void freespace_reference_config(ParticleSpec& particle, TweezerSpec& tweezer) {
    // Silica sphere monitored in free space (trap 2 pi x 73.25 kHz,
    // recoil rate 2 pi x 5 kHz).
    particle.radius = 85.75e-9;
    particle.density = 1850.0;
    particle.permittivity = 2.1;
    tweezer.power = 59.84e-3;
    tweezer.waist = 0.85e-6;
    tweezer.cross_section = tweezer.waist * tweezer.waist;
    tweezer.wavelength = 1064.0e-9;
}

} // namespace qng::rates
