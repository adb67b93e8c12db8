// cli.hpp -- scenario configuration, orchestration of the simulation
// pipeline, parameter sweeps, and result serialization.
//
// A scenario is: an engine (rotating-wave cavity, full cavity dynamics, or
// free space), a system parameter set, an initial mechanical state, one or
// more heralding pulses, and an analysis block selecting witnesses, depth,
// sensing and readout post-processing.  Scenarios come from a JSON config
// file; sweeps replace scalar parameters by value lists and evaluate the
// Cartesian product.  Every result is a flat ordered key/value row, emitted
// as CSV or JSON-lines with full-precision floats, so identical configs
// produce byte-identical output.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qng/herald.hpp"
#include "qng/params.hpp"
#include "qng/rates.hpp"

namespace qng::cli {

/// Version string recorded in every result row.
inline constexpr const char* kVersion = "1.0.0";

/// Which dynamical model produces the joint (mechanics, light) state.
enum class Engine { Rwa, Full, FreeSpace };

std::string to_string(Engine e);

/// One heralding pulse: sideband, duration (units of 1/kappa for the cavity
/// engines, 1/omega_m in free space) and detector efficiency.
struct PulseSpec {
    Sideband sideband = Sideband::Blue;
    double tau = 2.0;
    double eta = 1.0;
};

/// Thermalization depth analysis of the heralded state.
struct DepthSpec {
    bool enabled = false;
    std::string witness = "qng1"; ///< "qng<n>" or "nonclassical"
    double gamma = 1.0;           ///< bath coupling of the depth evolution
    double nbar = 100.0;          ///< bath occupation of the depth evolution
};

/// Displacement-sensing analysis: Fisher information and estimation error
/// of the heralded state used as a phase-randomized-displacement probe.
struct SensingSpec {
    bool enabled = false;
    std::vector<double> nc; ///< mean displacement quanta N_c grid
    int kmax = 2;           ///< highest resolved count; rest lumped
    int copies = 500;       ///< probe copies M in the Cramer-Rao error
};

/// Optical verification: a red readout pulse maps the phonon statistics on
/// the light, detected through a lossy counter.
struct ReadoutSpec {
    bool enabled = false;
    double tau2 = 0.0; ///< readout pulse length; 0 selects the swap time
    double eta = 1.0;  ///< detection efficiency of the readout counter
    int nmax = 8;      ///< photon numbers reported
};

/// One sweep axis: the path of a scalar config parameter and its values.
struct SweepAxis {
    std::string path;
    std::vector<double> values;
};

/// Physical system description; when present, the dimensionless coupling
/// (cavity engines) or measurement rate (free space) is derived from it.
struct PhysicalBlock {
    rates::ParticleSpec particle;
    rates::TweezerSpec tweezer;
    std::optional<rates::CavitySpec> cavity;
    double kappa = 0.0; ///< physical cavity linewidth [rad/s] (cavity engines)
};

/**
 * @brief Full description of one simulation scenario (or sweep thereof).
 */
struct ScenarioConfig {
    Engine engine = Engine::Rwa;

    /// Cavity-engine rates in units of kappa (g, gamma, nbar; kappa = 1).
    CavityParams system;
    /// Mechanical frequency in units of kappa (full engine only).
    double omega_m = 0.0;
    CouplingRamp ramp = CouplingRamp::Instant;
    OutputModeShape mode_shape = OutputModeShape::RotatingWave;

    /// Free-space rates in units of omega_m (free-space engine only).
    FreeSpaceParams freespace;

    /// Unit all rates are quoted in: "kappa" (cavity) or "omega_m" (free
    /// space); recorded in the output for provenance.
    std::string reference_rate = "kappa";

    MechInit initial;
    std::vector<PulseSpec> pulses{PulseSpec{}};

    /// Fock orders n of the witnesses Q_n > Q_n^G to evaluate.
    std::vector<int> witness_orders{1};
    /// Optional squeezed-Fock reference frame of the phonon statistics.
    double frame_r = 0.0;
    double frame_phi = 0.0;
    /// Phonon-space truncation of the reported statistics.
    int nmax = 40;

    DepthSpec depth;
    SensingSpec sensing;
    ReadoutSpec readout;

    /// Physical inputs the dimensionless rates were derived from, if any.
    std::optional<PhysicalBlock> physical;

    std::vector<SweepAxis> sweep;

    /// Recorded for provenance; no stochastic element consumes it.
    unsigned seed = 0;

    /// Throws ConfigError with a field path on any violated invariant.
    void validate() const;
};

/// Cavity scenario at the published simulation operating point: blue pulse
/// g = 0.02 kappa, kappa tau = 2, ground-state start, unit efficiency.
ScenarioConfig default_cavity_scenario();

/// Free-space scenario at the published operating point: measurement rate
/// 0.0082 omega_m, one mechanical period of light, near-ground start.
ScenarioConfig default_freespace_scenario();

/// One flat result record: ordered key/value pairs; insertion order defines
/// the serialization order.
struct ResultRow {
    using Value = std::variant<double, long long, bool, std::string>;
    std::vector<std::pair<std::string, Value>> fields;

    void set(const std::string& key, Value v);
    const Value* find(const std::string& key) const;
    double number(const std::string& key) const; ///< throws Error if absent or non-numeric

    /// Every numeric output finite, provenance fields non-empty.
    void validate() const;
};

/**
 * @brief Evaluate one scenario end to end: propagate the pulse(s), condition
 *        on the click record, evaluate witnesses and the enabled analyses.
 *
 * Module errors are rethrown with the failing pipeline stage prepended to
 * the message, preserving the error type.
 */
ResultRow run_scenario(const ScenarioConfig& config);

/**
 * @brief Cartesian-product sweep over the config's axes (empty sweep = one
 *        run_scenario row).  Per-row errors are captured into the row's
 *        "error" / "error_stage" fields and the sweep continues.  Rows are
 *        returned in lexicographic axis order regardless of worker count.
 */
std::vector<ResultRow> run_sweep(const ScenarioConfig& config, int workers = 1);

enum class Format { Csv, JsonLines };

/// Render rows: CSV with a header over the union of keys (first-appearance
/// order), or one JSON object per line.  Doubles carry 17 significant
/// digits throughout.
std::string render(const std::vector<ResultRow>& rows, Format format);

/// Render to a stream / file; file errors surface as IoError with the path.
void emit(const std::vector<ResultRow>& rows, Format format, std::ostream& out);
void emit_file(const std::vector<ResultRow>& rows, Format format, const std::string& path);

/// Rectangular phase-space grid over alpha = re + i im.
struct WignerGrid {
    double re_min = -4.0, re_max = 4.0;
    int re_points = 101;
    double im_min = -4.0, im_max = 4.0;
    int im_points = 101;
};

/// Dense Wigner-function dump: '#' header lines give the axes and the grid
/// peak, then im_points rows of re_points values.
void wigner_dump(const herald::HeraldedState& state, const WignerGrid& grid, std::ostream& out);
void wigner_dump_file(const herald::HeraldedState& state, const WignerGrid& grid,
                      const std::string& path);

/// Parse a config from JSON text / file.  Unknown keys, wrong types, bad
/// sweep paths and violated invariants raise ConfigError naming the field.
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Heralded state of a scenario (the object the Wigner dump serializes).
herald::HeraldedState heralded_state(const ScenarioConfig& config);

/// Entry point of the command-line tool; returns the process exit code
/// (0 ok, 1 config error, 2 numerical failure, 3 I/O failure).
int run(int argc, const char* const* argv);

} // namespace qng::cli
