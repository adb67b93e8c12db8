// params.cpp -- validation of parameter records.

#include "qng/params.hpp"

#include <cmath>

#include "qng/errors.hpp"

namespace qng {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw ConfigError(std::string(name) + " must be finite");
}

void require_nonneg(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) throw ConfigError(std::string(name) + " must be non-negative");
}

void require_positive(double v, const char* name) {
    require_finite(v, name);
    if (v <= 0.0) throw ConfigError(std::string(name) + " must be positive");
}

} // namespace

void MechInit::validate() const {
    require_nonneg(n0, "initial occupation n0");
    require_nonneg(r, "squeezing parameter r");
    require_finite(phi0, "squeezing phase phi0");
}

void CavityParams::validate() const {
    require_nonneg(g, "coupling g");
    require_positive(kappa, "cavity decay kappa");
    require_nonneg(gamma, "mechanical damping gamma");
    require_nonneg(nbar, "bath occupation nbar");
}

void FullQleParams::validate() const {
    cavity.validate();
    require_nonneg(omega_m, "mechanical frequency omega_m");
}

void FreeSpaceParams::validate() const {
    require_positive(omega_m, "mechanical frequency omega_m");
    require_nonneg(gamma, "mechanical damping gamma");
    require_nonneg(nbar, "bath occupation nbar");
    require_nonneg(meas_rate, "measurement rate");
}

std::string to_string(Sideband s) { return s == Sideband::Blue ? "blue" : "red"; }

} // namespace qng
