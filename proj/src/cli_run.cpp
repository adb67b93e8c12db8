// Command-line front end: subcommand definitions, flag handling, and the
// mapping of library errors onto stable process exit codes.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qng/cli.hpp"
#include "qng/criteria.hpp"
#include "qng/errors.hpp"
#include "qng/rates.hpp"

namespace qng::cli {

namespace {

/// Flags shared by every subcommand.
struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::string format = "jsonl";
    int workers = 1;
    std::string engine;
    long long seed = -1;
};

void add_common(CLI::App* sub, CommonOpts& o) {
    sub->add_option("--config", o.config_path, "JSON scenario configuration file");
    sub->add_option("--out", o.out_path, "output file (default: stdout)");
    sub->add_option("--format", o.format, "output format: csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    sub->add_option("--workers", o.workers, "concurrent sweep evaluations")
        ->check(CLI::PositiveNumber);
    sub->add_option("--engine", o.engine, "engine override: rwa, full or freespace")
        ->check(CLI::IsMember({"rwa", "full", "freespace"}));
    sub->add_option("--seed", o.seed, "seed recorded in the output rows");
}

Format parse_format(const std::string& s) {
    return s == "csv" ? Format::Csv : Format::JsonLines;
}

/// Scenario from --config (or the engine-matching defaults), with the
/// common overrides applied and re-validated.
ScenarioConfig make_config(const CommonOpts& o) {
    ScenarioConfig c;
    if (!o.config_path.empty()) {
        c = load_config(o.config_path);
    } else if (o.engine == "freespace") {
        c = default_freespace_scenario();
    } else {
        c = default_cavity_scenario();
    }
    if (!o.engine.empty()) {
        const Engine e = o.engine == "rwa"    ? Engine::Rwa
                         : o.engine == "full" ? Engine::Full
                                              : Engine::FreeSpace;
        if (e != c.engine) {
            c.engine = e;
            c.reference_rate = e == Engine::FreeSpace ? "omega_m" : "kappa";
            c.validate();
        }
    }
    if (o.seed >= 0) c.seed = static_cast<unsigned>(o.seed);
    return c;
}

void deliver(const std::vector<ResultRow>& rows, const CommonOpts& o) {
    if (o.out_path.empty()) {
        emit(rows, parse_format(o.format), std::cout);
    } else {
        emit_file(rows, parse_format(o.format), o.out_path);
    }
}

/// Copy of `row` without the sensing columns (used when exploding the
/// sensing grid into one row per displacement energy).
ResultRow strip_sensing(const ResultRow& row) {
    ResultRow out;
    for (const auto& kv : row.fields) {
        if (kv.first.rfind("sense_", 0) == 0) continue;
        out.fields.push_back(kv);
    }
    return out;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"heralded non-Gaussian mechanical states of a levitated particle: "
                 "preparation, verification and sensing toolkit"};
    app.require_subcommand(1);

    CommonOpts opt;

    CLI::App* herald_cmd =
        app.add_subcommand("herald", "run one heralding scenario and report the witnesses");
    std::string wigner_path;
    WignerGrid grid;
    add_common(herald_cmd, opt);
    herald_cmd->add_option("--wigner", wigner_path, "also dump the heralded Wigner function");
    herald_cmd->add_option("--wigner-range", grid.re_max,
                           "half-width R of the square grid over [-R, R]^2");
    herald_cmd->add_option("--wigner-points", grid.re_points, "grid points per axis");

    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "evaluate the Cartesian sweep defined in the config");
    add_common(sweep_cmd, opt);

    CLI::App* threshold_cmd =
        app.add_subcommand("threshold", "tabulate the non-Gaussianity thresholds");
    std::vector<int> orders{1, 2, 3, 4, 5};
    add_common(threshold_cmd, opt);
    threshold_cmd->add_option("--orders", orders, "witness orders n to tabulate");

    CLI::App* depth_cmd =
        app.add_subcommand("depth", "thermal depth of the heralded state's criterion");
    std::string witness;
    double bath_gamma = 0.0, bath_nbar = 0.0;
    add_common(depth_cmd, opt);
    depth_cmd->add_option("--witness", witness, "criterion: qng<n> or nonclassical");
    depth_cmd->add_option("--bath-gamma", bath_gamma, "bath coupling of the depth evolution");
    depth_cmd->add_option("--bath-nbar", bath_nbar, "bath occupation of the depth evolution");

    CLI::App* sense_cmd =
        app.add_subcommand("sense", "displacement sensing with the heralded state as probe");
    std::vector<double> nc_values;
    add_common(sense_cmd, opt);
    sense_cmd->add_option("--nc", nc_values, "displacement energies N_c to probe");

    CLI::App* readout_cmd =
        app.add_subcommand("readout", "photon statistics of the optical verification pulse");
    std::vector<double> eta_values;
    add_common(readout_cmd, opt);
    readout_cmd->add_option("--eta-values", eta_values,
                            "readout detector efficiencies (one row each)");

    CLI::App* rates_cmd =
        app.add_subcommand("rates", "derive dimensionless rates from the physical system block");
    add_common(rates_cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (herald_cmd->parsed()) {
            const ScenarioConfig c = make_config(opt);
            deliver({run_scenario(c)}, opt);
            if (!wigner_path.empty()) {
                grid.re_min = -grid.re_max;
                grid.im_min = -grid.re_max;
                grid.im_max = grid.re_max;
                grid.im_points = grid.re_points;
                wigner_dump_file(heralded_state(c), grid, wigner_path);
            }
        } else if (sweep_cmd->parsed()) {
            const ScenarioConfig c = make_config(opt);
            deliver(run_sweep(c, opt.workers), opt);
        } else if (threshold_cmd->parsed()) {
            std::vector<ResultRow> rows;
            for (int n : orders) {
                ResultRow row;
                row.set("version", std::string(kVersion));
                row.set("engine", std::string("threshold"));
                row.set("order", static_cast<long long>(n));
                row.set("threshold", criteria::qng_threshold(n));
                rows.push_back(std::move(row));
            }
            deliver(rows, opt);
        } else if (depth_cmd->parsed()) {
            ScenarioConfig c = make_config(opt);
            c.depth.enabled = true;
            if (!witness.empty()) c.depth.witness = witness;
            if (bath_gamma > 0.0) c.depth.gamma = bath_gamma;
            if (bath_nbar > 0.0) c.depth.nbar = bath_nbar;
            c.validate();
            deliver({run_scenario(c)}, opt);
        } else if (sense_cmd->parsed()) {
            ScenarioConfig c = make_config(opt);
            c.sensing.enabled = true;
            if (!nc_values.empty()) c.sensing.nc = nc_values;
            if (c.sensing.nc.empty()) c.sensing.nc = {0.1, 0.2, 0.3, 0.4, 0.5};
            c.validate();
            const ResultRow full = run_scenario(c);
            const ResultRow base = strip_sensing(full);
            std::vector<ResultRow> rows;
            for (size_t i = 0; i < c.sensing.nc.size(); ++i) {
                ResultRow row = base;
                const std::string tag = "sense_" + std::to_string(i);
                row.set("sense_kmax", static_cast<long long>(c.sensing.kmax));
                row.set("sense_copies", static_cast<long long>(c.sensing.copies));
                row.set("nc", full.number(tag + "_nc"));
                row.set("fisher", full.number(tag + "_fisher"));
                const ResultRow::Value* err = full.find(tag + "_error");
                row.set("error_nc", err != nullptr ? *err : ResultRow::Value{std::string()});
                rows.push_back(std::move(row));
            }
            deliver(rows, opt);
        } else if (readout_cmd->parsed()) {
            ScenarioConfig c = make_config(opt);
            c.readout.enabled = true;
            if (!eta_values.empty()) {
                c.sweep.clear();
                c.sweep.push_back(SweepAxis{"analysis.readout.eta", eta_values});
            }
            c.validate();
            deliver(run_sweep(c, opt.workers), opt);
        } else if (rates_cmd->parsed()) {
            const ScenarioConfig c = make_config(opt);
            if (!c.physical.has_value()) {
                throw ConfigError("the rates subcommand needs a 'system.physical' block in the "
                                  "config");
            }
            const PhysicalBlock& b = *c.physical;
            const bool fs = c.engine == Engine::FreeSpace;
            const rates::PhysicalRates r = rates::derive_physical_rates(
                b.particle, b.tweezer, fs ? std::nullopt : b.cavity);
            ResultRow row;
            row.set("version", std::string(kVersion));
            row.set("engine", to_string(c.engine));
            row.set("omega_m_rad_s", r.omega_m);
            row.set("mass_kg", r.mass);
            row.set("x_zpf_m", r.x_zpf);
            if (fs) {
                row.set("gamma_ba_rad_s", r.gamma_ba);
                row.set("meas_rate", r.gamma_ba / r.omega_m);
                row.set("reference_rate", std::string("omega_m"));
            } else {
                row.set("g_rad_s", r.g);
                row.set("kappa_rad_s", b.kappa);
                row.set("g", r.g / b.kappa);
                row.set("omega_m", r.omega_m / b.kappa);
                row.set("reference_rate", std::string("kappa"));
            }
            deliver({row}, opt);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return 3;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return 2;
    }
    return 0;
}

} // namespace qng::cli
