// params.hpp -- parameter records describing the mechanical oscillator, the
// optomechanical interaction and the measurement chain.  All rates are
// angular frequencies in a common user-chosen unit (the examples use the
// cavity linewidth kappa, respectively the mechanical frequency omega_m).
#pragma once

#include <string>

namespace qng {

/// Which sideband the pump laser addresses, i.e. which effective
/// interaction the pulse realizes.
enum class Sideband {
    Blue, ///< two-mode-squeezing b^dag a^dag + h.c. (phonon addition)
    Red,  ///< beam-splitter      b a^dag + h.c.     (phonon subtraction / swap)
};

/// Initial mechanical state: a squeezed thermal state with occupation n0,
/// squeezing parameter r and squeezing phase phi0 (r = 0 gives a thermal
/// state, n0 = 0 a squeezed vacuum).
struct MechInit {
    double n0 = 0.0;
    double r = 0.0;
    double phi0 = 0.0;

    void validate() const;
};

/// Pulsed cavity optomechanics in the resolved-sideband rotating-wave
/// regime.  The mechanical frequency does not enter the rotating-frame
/// dynamics; it is only needed by the beyond-rotating-wave engine.
struct CavityParams {
    double g = 0.0;      ///< effective optomechanical coupling
    double kappa = 1.0;  ///< cavity amplitude decay rate
    double gamma = 0.0;  ///< mechanical amplitude damping rate
    double nbar = 0.0;   ///< thermal occupation of the mechanical bath
    Sideband sideband = Sideband::Blue;

    /// Thermal heating rate gamma * nbar (the figure-of-merit knob).
    double heating() const { return gamma * nbar; }

    void validate() const;
};

/// Coupling ramp of the beyond-rotating-wave engine: the pump is either
/// switched instantaneously or rises as g(t) = g (1 - exp(-kappa t)).
enum class CouplingRamp { Instant, Exponential };

/// Temporal mode the beyond-rotating-wave engine projects the output
/// field on: the rotating-wave mode shape of the same sideband, or a
/// numerically matched mode maximizing the captured signal.
enum class OutputModeShape { RotatingWave, Matched };

/// Parameters of the beyond-rotating-wave (full) cavity engine.
struct FullQleParams {
    CavityParams cavity;
    double omega_m = 0.0; ///< mechanical frequency (sets the counter-rotating time scale)
    CouplingRamp ramp = CouplingRamp::Instant;
    OutputModeShape mode_shape = OutputModeShape::RotatingWave;

    void validate() const;
};

/// Free-space (cavity-less) scheme: the tweezed particle is monitored by
/// continuous dispersive detection of the scattered light.
struct FreeSpaceParams {
    double omega_m = 1.0;   ///< mechanical frequency
    double gamma = 0.0;     ///< mechanical amplitude damping rate
    double nbar = 0.0;      ///< thermal occupation of the mechanical bath
    double meas_rate = 0.0; ///< quantum measurement (back-action) rate

    double heating() const { return gamma * nbar; }

    void validate() const;
};

/// Human-readable tag of a sideband, for logs and serialization.
std::string to_string(Sideband s);

} // namespace qng
