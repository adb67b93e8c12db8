#include "qng/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "json.hpp"

#include "qng/cavity.hpp"
#include "qng/covariance.hpp"
#include "qng/criteria.hpp"
#include "qng/errors.hpp"
#include "qng/freespace.hpp"
#include "qng/fullqle.hpp"
#include "qng/readout.hpp"
#include "qng/sensing.hpp"

namespace qng::cli {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// formatting

/// Full-precision, locale-independent float rendering (17 significant
/// digits round-trip any double exactly).
std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt(const ResultRow::Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return fmt(*d);
    if (const auto* i = std::get_if<long long>(&v)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
    return std::get<std::string>(v);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_escape(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

std::string json_value(const ResultRow::Value& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return json_escape(*s);
    return fmt(v);
}

// ---------------------------------------------------------------------------
// enum names

Sideband parse_sideband(const std::string& s, const std::string& path) {
    if (s == "blue") return Sideband::Blue;
    if (s == "red") return Sideband::Red;
    throw ConfigError("config field '" + path + "': expected \"blue\" or \"red\", got \"" + s +
                      "\"");
}

Engine parse_engine(const std::string& s, const std::string& path) {
    if (s == "rwa") return Engine::Rwa;
    if (s == "full") return Engine::Full;
    if (s == "freespace") return Engine::FreeSpace;
    throw ConfigError("config field '" + path + "': expected \"rwa\", \"full\" or \"freespace\"" +
                      ", got \"" + s + "\"");
}

CouplingRamp parse_ramp(const std::string& s, const std::string& path) {
    if (s == "instant") return CouplingRamp::Instant;
    if (s == "exponential") return CouplingRamp::Exponential;
    throw ConfigError("config field '" + path + "': expected \"instant\" or \"exponential\"");
}

OutputModeShape parse_mode_shape(const std::string& s, const std::string& path) {
    if (s == "rotating_wave") return OutputModeShape::RotatingWave;
    if (s == "matched") return OutputModeShape::Matched;
    throw ConfigError("config field '" + path + "': expected \"rotating_wave\" or \"matched\"");
}

// ---------------------------------------------------------------------------
// JSON access with field-path error messages

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("config field '" + path + "': expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (item.key() == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError("config: unknown field '" +
                              (path.empty() ? item.key() : path + "." + item.key()) + "'");
        }
    }
}

double get_num(const json& j, const std::string& path, const char* key, double def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("config field '" + path + "." + key +
                                          "': expected a number");
    return v.get<double>();
}

double req_num(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) throw ConfigError("config field '" + path + "." + key + "' is required");
    return get_num(j, path, key, 0.0);
}

long long get_int(const json& j, const std::string& path, const char* key, long long def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ConfigError("config field '" + path + "." + key +
                                                  "': expected an integer");
    return v.get<long long>();
}

bool get_bool(const json& j, const std::string& path, const char* key, bool def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_boolean()) throw ConfigError("config field '" + path + "." + key +
                                           "': expected a boolean");
    return v.get<bool>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& def) {
    if (!j.contains(key)) return def;
    const json& v = j.at(key);
    if (!v.is_string()) throw ConfigError("config field '" + path + "." + key +
                                          "': expected a string");
    return v.get<std::string>();
}

std::vector<double> get_num_list(const json& j, const std::string& path, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    const json& v = j.at(key);
    if (!v.is_array()) throw ConfigError("config field '" + path + "." + key +
                                         "': expected an array of numbers");
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError("config field '" + path + "." + key +
                                              "': expected an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------------------
// pipeline-stage error annotation

[[noreturn]] void rethrow_with_stage(const char* name) {
    const auto note = [&](const char* what) {
        return std::string("stage '") + name + "': " + what;
    };
    try {
        throw;
    } catch (const NoClickSupport& e) {
        throw NoClickSupport(note(e.what()));
    } catch (const TruncationError& e) {
        throw TruncationError(note(e.what()));
    } catch (const ConfigError& e) {
        throw ConfigError(note(e.what()));
    } catch (const IoError& e) {
        throw IoError(note(e.what()));
    } catch (const NumericalError& e) {
        throw NumericalError(note(e.what()));
    } catch (const Error& e) {
        throw Error(note(e.what()));
    }
}

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error&) {
        rethrow_with_stage(name);
    }
}

// ---------------------------------------------------------------------------
// sweep parameter paths

using Setter = void (*)(ScenarioConfig&, double);

Setter find_setter(const std::string& path, Engine engine) {
    const bool fs = engine == Engine::FreeSpace;
    if (path == "system.g") {
        if (fs) return nullptr;
        return [](ScenarioConfig& c, double v) { c.system.g = v; };
    }
    if (path == "system.gamma") {
        return fs ? Setter([](ScenarioConfig& c, double v) { c.freespace.gamma = v; })
                  : Setter([](ScenarioConfig& c, double v) { c.system.gamma = v; });
    }
    if (path == "system.nbar") {
        return fs ? Setter([](ScenarioConfig& c, double v) { c.freespace.nbar = v; })
                  : Setter([](ScenarioConfig& c, double v) { c.system.nbar = v; });
    }
    if (path == "system.omega_m") {
        if (fs) return nullptr;
        return [](ScenarioConfig& c, double v) { c.omega_m = v; };
    }
    if (path == "system.meas_rate") {
        if (!fs) return nullptr;
        return [](ScenarioConfig& c, double v) { c.freespace.meas_rate = v; };
    }
    if (path == "initial.n0") return [](ScenarioConfig& c, double v) { c.initial.n0 = v; };
    if (path == "initial.r") return [](ScenarioConfig& c, double v) { c.initial.r = v; };
    if (path == "initial.phi0") return [](ScenarioConfig& c, double v) { c.initial.phi0 = v; };
    if (path == "pulses.tau") {
        return [](ScenarioConfig& c, double v) {
            for (auto& p : c.pulses) p.tau = v;
        };
    }
    if (path == "pulses.eta") {
        return [](ScenarioConfig& c, double v) {
            for (auto& p : c.pulses) p.eta = v;
        };
    }
    if (path == "analysis.frame_r") return [](ScenarioConfig& c, double v) { c.frame_r = v; };
    if (path == "analysis.frame_phi") return [](ScenarioConfig& c, double v) { c.frame_phi = v; };
    if (path == "analysis.readout.eta") {
        return [](ScenarioConfig& c, double v) { c.readout.eta = v; };
    }
    if (path == "analysis.readout.tau2") {
        return [](ScenarioConfig& c, double v) { c.readout.tau2 = v; };
    }
    if (path == "analysis.depth.gamma") {
        return [](ScenarioConfig& c, double v) { c.depth.gamma = v; };
    }
    if (path == "analysis.depth.nbar") {
        return [](ScenarioConfig& c, double v) { c.depth.nbar = v; };
    }
    return nullptr;
}

criteria::DepthWitness parse_depth_witness(const std::string& s) {
    if (s == "nonclassical") return criteria::DepthWitness::nonclassical();
    if (s.rfind("qng", 0) == 0 && s.size() > 3) {
        int n = 0;
        try {
            n = std::stoi(s.substr(3));
        } catch (const std::exception&) {
            n = 0;
        }
        if (n >= 1 && n <= 8) return criteria::DepthWitness::qng(n);
    }
    throw ConfigError("config field 'analysis.depth.witness': expected \"qng<1..8>\" or "
                      "\"nonclassical\", got \"" +
                      s + "\"");
}

// ---------------------------------------------------------------------------
// scenario pipeline

herald::HeraldedState heralded_impl(const ScenarioConfig& c) {
    if (c.engine == Engine::FreeSpace) {
        const PulseSpec& pu = c.pulses.front();
        const QuadCM joint = stage("propagate", [&] {
            return freespace::propagate_freespace(c.freespace, pu.tau, c.initial);
        });
        return stage("herald", [&] { return herald::condition_click(joint.field(), pu.eta); });
    }

    const Mat2c mech0 = FieldCM::squeezed_thermal(c.initial).mat();
    if (c.pulses.size() == 1) {
        const PulseSpec& pu = c.pulses.front();
        CavityParams p = c.system;
        p.sideband = pu.sideband;
        const FieldCM joint = stage("propagate", [&] {
            if (c.engine == Engine::Rwa) return cavity::propagate_pulse(mech0, p, pu.tau);
            FullQleParams fp;
            fp.cavity = p;
            fp.omega_m = c.omega_m;
            fp.ramp = c.ramp;
            fp.mode_shape = c.mode_shape;
            return fullqle::propagate_pulse(mech0, fp, pu.tau);
        });
        return stage("herald", [&] { return herald::condition_click(joint, pu.eta); });
    }

    // repeated identical pulses (validated): pulse + click each round
    CavityParams p = c.system;
    p.sideband = c.pulses.front().sideband;
    return stage("herald", [&] {
        return herald::multipulse_heralded(mech0, p, c.pulses.front().tau, c.pulses.front().eta,
                                           static_cast<int>(c.pulses.size()));
    });
}

void echo_inputs(ResultRow& row, const ScenarioConfig& c) {
    row.set("version", std::string(kVersion));
    row.set("engine", to_string(c.engine));
    row.set("seed", static_cast<long long>(c.seed));
    row.set("reference_rate", c.reference_rate);
    if (c.engine == Engine::FreeSpace) {
        row.set("omega_m", c.freespace.omega_m);
        row.set("gamma", c.freespace.gamma);
        row.set("nbar", c.freespace.nbar);
        row.set("meas_rate", c.freespace.meas_rate);
    } else {
        row.set("g", c.system.g);
        row.set("kappa", c.system.kappa);
        row.set("gamma", c.system.gamma);
        row.set("nbar", c.system.nbar);
        if (c.engine == Engine::Full) {
            row.set("omega_m", c.omega_m);
            row.set("ramp",
                    std::string(c.ramp == CouplingRamp::Instant ? "instant" : "exponential"));
            row.set("mode_shape", std::string(c.mode_shape == OutputModeShape::RotatingWave
                                                  ? "rotating_wave"
                                                  : "matched"));
        }
    }
    row.set("n0", c.initial.n0);
    row.set("r", c.initial.r);
    row.set("phi0", c.initial.phi0);
    row.set("pulses", static_cast<long long>(c.pulses.size()));
    row.set("sideband", to_string(c.pulses.front().sideband));
    row.set("tau", c.pulses.front().tau);
    row.set("eta", c.pulses.front().eta);
    row.set("frame_r", c.frame_r);
    row.set("frame_phi", c.frame_phi);
    row.set("nmax", static_cast<long long>(c.nmax));
}

} // namespace

std::string to_string(Engine e) {
    switch (e) {
        case Engine::Rwa: return "rwa";
        case Engine::Full: return "full";
        case Engine::FreeSpace: return "freespace";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// ResultRow

void ResultRow::set(const std::string& key, Value v) {
    for (auto& kv : fields) {
        if (kv.first == key) {
            kv.second = std::move(v);
            return;
        }
    }
    fields.emplace_back(key, std::move(v));
}

const ResultRow::Value* ResultRow::find(const std::string& key) const {
    for (const auto& kv : fields) {
        if (kv.first == key) return &kv.second;
    }
    return nullptr;
}

double ResultRow::number(const std::string& key) const {
    const Value* v = find(key);
    if (v == nullptr) throw Error("result row has no field '" + key + "'");
    if (const auto* d = std::get_if<double>(v)) return *d;
    if (const auto* i = std::get_if<long long>(v)) return static_cast<double>(*i);
    throw Error("result row field '" + key + "' is not numeric");
}

void ResultRow::validate() const {
    for (const auto& kv : fields) {
        if (const auto* d = std::get_if<double>(&kv.second)) {
            if (!std::isfinite(*d)) {
                throw NumericalError("result row field '" + kv.first + "' is not finite");
            }
        }
    }
    for (const char* key : {"version", "engine"}) {
        const Value* v = find(key);
        if (v == nullptr || std::get_if<std::string>(v) == nullptr ||
            std::get<std::string>(*v).empty()) {
            throw Error(std::string("result row lacks provenance field '") + key + "'");
        }
    }
}

// ---------------------------------------------------------------------------
// configs

void ScenarioConfig::validate() const {
    if (pulses.empty()) throw ConfigError("config field 'pulses': at least one pulse is required");
    for (size_t i = 0; i < pulses.size(); ++i) {
        const auto tag = "pulses[" + std::to_string(i) + "]";
        if (!(pulses[i].tau > 0.0)) {
            throw ConfigError("config field '" + tag + ".tau' must be positive");
        }
        if (!(pulses[i].eta >= 0.0 && pulses[i].eta <= 1.0)) {
            throw ConfigError("config field '" + tag + ".eta' must lie in [0, 1]");
        }
    }
    if (pulses.size() > 1) {
        if (engine != Engine::Rwa) {
            throw ConfigError("config field 'pulses': repeated pulses are only supported by the "
                              "rotating-wave engine");
        }
        for (const auto& p : pulses) {
            if (p.sideband != pulses.front().sideband || p.tau != pulses.front().tau ||
                p.eta != pulses.front().eta) {
                throw ConfigError("config field 'pulses': repeated pulses must be identical");
            }
        }
    }

    if (engine == Engine::FreeSpace) {
        freespace.validate();
    } else {
        system.validate();
        if (engine == Engine::Full && !(omega_m > 0.0)) {
            throw ConfigError("config field 'system.omega_m' must be positive for the full "
                              "engine");
        }
    }
    if (reference_rate != "kappa" && reference_rate != "omega_m") {
        throw ConfigError("config field 'system.reference_rate': expected \"kappa\" or "
                          "\"omega_m\"");
    }
    initial.validate();

    if (witness_orders.empty()) {
        throw ConfigError("config field 'analysis.witness_orders' must not be empty");
    }
    int max_order = 0;
    for (int n : witness_orders) {
        if (n < 1 || n > 8) {
            throw ConfigError("config field 'analysis.witness_orders': orders must lie in "
                              "[1, 8]");
        }
        max_order = std::max(max_order, n);
    }
    if (frame_r < 0.0) throw ConfigError("config field 'analysis.frame.r' must be >= 0");
    if (nmax < std::max(max_order + 2, 3)) {
        throw ConfigError("config field 'analysis.nmax' too small for the requested witnesses");
    }

    if (depth.enabled) {
        parse_depth_witness(depth.witness);
        if (!(depth.gamma > 0.0) || !(depth.nbar > 0.0)) {
            throw ConfigError("config fields 'analysis.depth.gamma' and 'analysis.depth.nbar' "
                              "must be positive");
        }
    }
    if (sensing.enabled) {
        if (sensing.nc.empty()) {
            throw ConfigError("config field 'analysis.sensing.nc' must not be empty");
        }
        for (double v : sensing.nc) {
            if (!(v >= 0.0)) {
                throw ConfigError("config field 'analysis.sensing.nc': values must be >= 0");
            }
        }
        if (sensing.kmax < 0) {
            throw ConfigError("config field 'analysis.sensing.kmax' must be >= 0");
        }
        if (sensing.copies < 1) {
            throw ConfigError("config field 'analysis.sensing.copies' must be >= 1");
        }
    }
    if (readout.enabled) {
        if (readout.tau2 < 0.0) {
            throw ConfigError("config field 'analysis.readout.tau2' must be >= 0");
        }
        if (!(readout.eta >= 0.0 && readout.eta <= 1.0)) {
            throw ConfigError("config field 'analysis.readout.eta' must lie in [0, 1]");
        }
        if (readout.nmax < 1) {
            throw ConfigError("config field 'analysis.readout.nmax' must be >= 1");
        }
        if (engine == Engine::FreeSpace && !(system.g > 0.0)) {
            throw ConfigError("config field 'analysis.readout': the readout pulse needs cavity "
                              "parameters (system.g) even for free-space preparation");
        }
    }

    if (sweep.size() > 3) throw ConfigError("config field 'sweep': at most 3 axes are supported");
    for (const auto& axis : sweep) {
        if (axis.values.empty()) {
            throw ConfigError("config field 'sweep': axis '" + axis.path + "' has no values");
        }
        if (find_setter(axis.path, engine) == nullptr) {
            throw ConfigError("config field 'sweep': unknown parameter path '" + axis.path +
                              "' for engine '" + to_string(engine) + "'");
        }
    }
}

ScenarioConfig default_cavity_scenario() {
    ScenarioConfig c;
    c.engine = Engine::Rwa;
    c.system.g = 0.02;
    c.system.kappa = 1.0;
    c.system.gamma = 0.0;
    c.system.nbar = 0.0;
    c.system.sideband = Sideband::Blue;
    c.reference_rate = "kappa";
    c.initial = MechInit{0.0, 0.0, 0.0};
    c.pulses = {PulseSpec{Sideband::Blue, 2.0, 1.0}};
    c.witness_orders = {1};
    c.nmax = 40;
    return c;
}

ScenarioConfig default_freespace_scenario() {
    ScenarioConfig c;
    c.engine = Engine::FreeSpace;
    c.freespace.omega_m = 1.0;
    c.freespace.gamma = 0.0054;
    c.freespace.nbar = 0.1;
    c.freespace.meas_rate = 0.0082;
    c.reference_rate = "omega_m";
    c.initial = MechInit{0.01, 0.0, 0.0};
    c.pulses = {PulseSpec{Sideband::Blue, 1.0, 1.0}};
    c.witness_orders = {1};
    c.nmax = 40;
    return c;
}

// ---------------------------------------------------------------------------
// config parsing

ScenarioConfig config_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    require_object(root, "(root)");
    reject_unknown(root, "",
                   {"engine", "seed", "system", "initial", "pulses", "detector", "analysis",
                    "sweep"});

    // Overlay the file onto the engine's published default operating point,
    // so a minimal config is already a meaningful scenario.
    const Engine engine = parse_engine(get_str(root, "", "engine", "rwa"), "engine");
    ScenarioConfig c = engine == Engine::FreeSpace ? default_freespace_scenario()
                                                   : default_cavity_scenario();
    c.engine = engine;
    c.seed = static_cast<unsigned>(get_int(root, "", "seed", 0));

    double detector_eta = 1.0;
    if (root.contains("detector")) {
        const json& d = root.at("detector");
        require_object(d, "detector");
        reject_unknown(d, "detector", {"eta"});
        detector_eta = get_num(d, "detector", "eta", 1.0);
    }

    if (root.contains("system")) {
        const json& s = root.at("system");
        require_object(s, "system");
        reject_unknown(s, "system",
                       {"g", "kappa", "gamma", "nbar", "omega_m", "meas_rate", "reference_rate",
                        "ramp", "mode_shape", "physical"});
        const bool fs = c.engine == Engine::FreeSpace;
        c.system.g = get_num(s, "system", "g", c.system.g);
        c.system.kappa = get_num(s, "system", "kappa", c.system.kappa);
        const double gamma =
            get_num(s, "system", "gamma", fs ? c.freespace.gamma : c.system.gamma);
        const double nbar = get_num(s, "system", "nbar", fs ? c.freespace.nbar : c.system.nbar);
        c.system.gamma = gamma;
        c.system.nbar = nbar;
        c.omega_m = get_num(s, "system", "omega_m", c.omega_m);
        c.freespace.gamma = gamma;
        c.freespace.nbar = nbar;
        c.freespace.meas_rate = get_num(s, "system", "meas_rate", c.freespace.meas_rate);
        c.freespace.omega_m = 1.0;
        c.reference_rate = get_str(root.at("system"), "system", "reference_rate",
                                   c.engine == Engine::FreeSpace ? "omega_m" : "kappa");
        c.ramp = parse_ramp(get_str(s, "system", "ramp", "instant"), "system.ramp");
        c.mode_shape = parse_mode_shape(get_str(s, "system", "mode_shape", "rotating_wave"),
                                        "system.mode_shape");

        if (s.contains("physical")) {
            const json& ph = s.at("physical");
            require_object(ph, "system.physical");
            reject_unknown(ph, "system.physical", {"particle", "tweezer", "cavity", "kappa"});
            PhysicalBlock block;
            if (!ph.contains("particle") || !ph.contains("tweezer")) {
                throw ConfigError("config field 'system.physical': 'particle' and 'tweezer' "
                                  "blocks are required");
            }
            const json& pa = ph.at("particle");
            require_object(pa, "system.physical.particle");
            reject_unknown(pa, "system.physical.particle", {"radius", "density", "permittivity"});
            block.particle.radius = req_num(pa, "system.physical.particle", "radius");
            block.particle.density = req_num(pa, "system.physical.particle", "density");
            block.particle.permittivity = req_num(pa, "system.physical.particle", "permittivity");
            const json& tw = ph.at("tweezer");
            require_object(tw, "system.physical.tweezer");
            reject_unknown(tw, "system.physical.tweezer",
                           {"power", "waist", "cross_section", "wavelength"});
            block.tweezer.power = req_num(tw, "system.physical.tweezer", "power");
            block.tweezer.waist = req_num(tw, "system.physical.tweezer", "waist");
            block.tweezer.cross_section =
                get_num(tw, "system.physical.tweezer", "cross_section",
                        block.tweezer.waist * block.tweezer.waist);
            block.tweezer.wavelength = get_num(tw, "system.physical.tweezer", "wavelength", 0.0);
            if (ph.contains("cavity")) {
                const json& cv = ph.at("cavity");
                require_object(cv, "system.physical.cavity");
                reject_unknown(cv, "system.physical.cavity", {"frequency", "waist", "length"});
                rates::CavitySpec spec;
                spec.frequency = req_num(cv, "system.physical.cavity", "frequency");
                spec.waist = req_num(cv, "system.physical.cavity", "waist");
                spec.length = req_num(cv, "system.physical.cavity", "length");
                block.cavity = spec;
            }
            block.kappa = get_num(ph, "system.physical", "kappa", 0.0);
            c.physical = block;

            // Derive the dimensionless rates right away so the rest of the
            // pipeline never distinguishes physical from direct configs.
            stage("rates", [&] {
                if (c.engine == Engine::FreeSpace) {
                    const rates::PhysicalRates r =
                        rates::derive_physical_rates(block.particle, block.tweezer, std::nullopt);
                    c.freespace.meas_rate = r.gamma_ba / r.omega_m;
                } else {
                    if (!block.cavity.has_value()) {
                        throw ConfigError("config field 'system.physical.cavity' is required to "
                                          "derive cavity rates");
                    }
                    if (!(block.kappa > 0.0)) {
                        throw ConfigError("config field 'system.physical.kappa' (physical "
                                          "linewidth, rad/s) is required to derive cavity rates");
                    }
                    const rates::PhysicalRates r =
                        rates::derive_physical_rates(block.particle, block.tweezer, block.cavity);
                    c.system.g = r.g / block.kappa;
                    c.system.kappa = 1.0;
                    if (c.engine == Engine::Full && !s.contains("omega_m")) {
                        c.omega_m = r.omega_m / block.kappa;
                    }
                }
                return 0;
            });
        }
    }

    if (root.contains("initial")) {
        const json& in = root.at("initial");
        require_object(in, "initial");
        reject_unknown(in, "initial", {"n0", "r", "phi0"});
        c.initial.n0 = get_num(in, "initial", "n0", c.initial.n0);
        c.initial.r = get_num(in, "initial", "r", c.initial.r);
        c.initial.phi0 = get_num(in, "initial", "phi0", c.initial.phi0);
    }

    if (root.contains("pulses")) {
        const json& ps = root.at("pulses");
        if (!ps.is_array()) throw ConfigError("config field 'pulses': expected an array");
        const PulseSpec defaults = c.pulses.front();
        c.pulses.clear();
        int i = 0;
        for (const auto& pj : ps) {
            const std::string tag = "pulses[" + std::to_string(i++) + "]";
            require_object(pj, tag);
            reject_unknown(pj, tag, {"sideband", "tau", "eta"});
            PulseSpec p;
            p.sideband = parse_sideband(get_str(pj, tag, "sideband", to_string(defaults.sideband)),
                                        tag + ".sideband");
            p.tau = get_num(pj, tag, "tau", defaults.tau);
            p.eta = get_num(pj, tag, "eta", detector_eta);
            c.pulses.push_back(p);
        }
    } else {
        for (auto& p : c.pulses) p.eta = detector_eta;
    }

    if (root.contains("analysis")) {
        const json& an = root.at("analysis");
        require_object(an, "analysis");
        reject_unknown(an, "analysis",
                       {"witness_orders", "frame", "nmax", "depth", "sensing", "readout"});
        if (an.contains("witness_orders")) {
            const auto orders = get_num_list(an, "analysis", "witness_orders");
            c.witness_orders.clear();
            for (double v : orders) c.witness_orders.push_back(static_cast<int>(v));
        }
        if (an.contains("frame")) {
            const json& fr = an.at("frame");
            require_object(fr, "analysis.frame");
            reject_unknown(fr, "analysis.frame", {"r", "phi"});
            c.frame_r = get_num(fr, "analysis.frame", "r", 0.0);
            c.frame_phi = get_num(fr, "analysis.frame", "phi", 0.0);
        }
        c.nmax = static_cast<int>(get_int(an, "analysis", "nmax", 40));
        if (an.contains("depth")) {
            const json& de = an.at("depth");
            require_object(de, "analysis.depth");
            reject_unknown(de, "analysis.depth", {"enabled", "witness", "gamma", "nbar"});
            c.depth.enabled = get_bool(de, "analysis.depth", "enabled", true);
            c.depth.witness = get_str(de, "analysis.depth", "witness", "qng1");
            c.depth.gamma = get_num(de, "analysis.depth", "gamma", 1.0);
            c.depth.nbar = get_num(de, "analysis.depth", "nbar", 100.0);
        }
        if (an.contains("sensing")) {
            const json& se = an.at("sensing");
            require_object(se, "analysis.sensing");
            reject_unknown(se, "analysis.sensing", {"enabled", "nc", "kmax", "copies"});
            c.sensing.enabled = get_bool(se, "analysis.sensing", "enabled", true);
            c.sensing.nc = get_num_list(se, "analysis.sensing", "nc");
            c.sensing.kmax = static_cast<int>(get_int(se, "analysis.sensing", "kmax", 2));
            c.sensing.copies = static_cast<int>(get_int(se, "analysis.sensing", "copies", 500));
        }
        if (an.contains("readout")) {
            const json& re = an.at("readout");
            require_object(re, "analysis.readout");
            reject_unknown(re, "analysis.readout", {"enabled", "tau2", "eta", "nmax"});
            c.readout.enabled = get_bool(re, "analysis.readout", "enabled", true);
            c.readout.tau2 = get_num(re, "analysis.readout", "tau2", 0.0);
            c.readout.eta = get_num(re, "analysis.readout", "eta", detector_eta);
            c.readout.nmax = static_cast<int>(get_int(re, "analysis.readout", "nmax", 8));
        }
    }

    if (root.contains("sweep")) {
        const json& sw = root.at("sweep");
        if (!sw.is_array()) throw ConfigError("config field 'sweep': expected an array");
        int i = 0;
        for (const auto& aj : sw) {
            const std::string tag = "sweep[" + std::to_string(i++) + "]";
            require_object(aj, tag);
            reject_unknown(aj, tag, {"path", "values"});
            SweepAxis axis;
            axis.path = get_str(aj, tag, "path", "");
            axis.values = get_num_list(aj, tag, "values");
            if (axis.path.empty()) {
                throw ConfigError("config field '" + tag + ".path' is required");
            }
            c.sweep.push_back(axis);
        }
    }

    c.validate();
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("failed reading config file '" + path + "'");
    return config_from_json(buf.str());
}

// ---------------------------------------------------------------------------
// scenario execution

herald::HeraldedState heralded_state(const ScenarioConfig& config) {
    stage("config", [&] {
        config.validate();
        return 0;
    });
    return heralded_impl(config);
}

ResultRow run_scenario(const ScenarioConfig& config) {
    stage("config", [&] {
        config.validate();
        return 0;
    });

    ResultRow row;
    echo_inputs(row, config);

    const herald::HeraldedState h = heralded_impl(config);
    row.set("p_click", h.probability);
    row.set("mean_n", h.mean_occupation());

    std::optional<herald::SqueezeFrame> frame;
    if (config.frame_r != 0.0) frame = herald::SqueezeFrame{config.frame_r, config.frame_phi};

    const Eigen::VectorXd pops =
        stage("witness", [&] { return h.phonon_populations(config.nmax, frame); });
    row.set("pop_tail", std::max(0.0, 1.0 - pops.sum()));

    int max_order = 1;
    for (int n : config.witness_orders) max_order = std::max(max_order, n);
    const criteria::WitnessReport report = stage("witness", [&] {
        return criteria::witness_report(pops, max_order, config.frame_r, config.frame_phi);
    });
    for (int n = 0; n <= max_order; ++n) row.set("q" + std::to_string(n), pops(n));
    for (int n : config.witness_orders) {
        const criteria::QngVerdict& v = report.qng.at(static_cast<size_t>(n - 1));
        const std::string tag = "qng" + std::to_string(n);
        row.set(tag + "_threshold", v.threshold);
        row.set(tag + "_margin", v.margin);
        row.set(tag + "_pass", v.pass);
    }
    row.set("nonclassical_ineq1", report.nonclassical.ineq1);
    row.set("nonclassical_ineq2", report.nonclassical.ineq2);

    if (config.depth.enabled) {
        const criteria::DepthWitness w = parse_depth_witness(config.depth.witness);
        const criteria::DepthResult d = stage("depth", [&] {
            return criteria::depth(pops, w, config.depth.gamma, config.depth.nbar);
        });
        row.set("depth_witness", config.depth.witness);
        row.set("depth_d", d.d);
        row.set("depth_passed_at_zero", d.passed_at_zero);
        row.set("depth_unbounded", d.unbounded);
    }

    if (config.sensing.enabled) {
        const Eigen::VectorXd grid = Eigen::Map<const Eigen::VectorXd>(
            config.sensing.nc.data(), static_cast<long>(config.sensing.nc.size()));
        const sensing::SensingResult res = stage("sensing", [&] {
            return sensing::sense_grid(pops, grid, config.sensing.kmax, config.sensing.copies);
        });
        row.set("sense_kmax", static_cast<long long>(res.kmax));
        row.set("sense_copies", static_cast<long long>(res.copies));
        for (long i = 0; i < res.nc_grid.size(); ++i) {
            const std::string tag = "sense_" + std::to_string(i);
            row.set(tag + "_nc", res.nc_grid(i));
            row.set(tag + "_fisher", res.fisher_info(i));
            if (std::isfinite(res.error(i))) {
                row.set(tag + "_error", res.error(i));
            } else {
                row.set(tag + "_error", std::string("infinite"));
            }
        }
    }

    if (config.readout.enabled) {
        CavityParams p = config.system;
        p.sideband = Sideband::Red;
        const double tau2 = stage("readout", [&] {
            return config.readout.tau2 > 0.0 ? config.readout.tau2 : readout::swap_time(p);
        });
        const readout::PhotonStats stats = stage("readout", [&] {
            return readout::detected_probabilities(h, p, tau2, config.readout.eta,
                                                   config.readout.nmax);
        });
        row.set("readout_tau2", tau2);
        row.set("readout_eta", config.readout.eta);
        for (long n = 0; n < stats.p.size(); ++n) {
            row.set("readout_p" + std::to_string(n), stats.p(n));
        }
    }

    row.set("error", std::string());
    row.set("error_stage", std::string());
    row.validate();
    return row;
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& config, int workers) {
    stage("config", [&] {
        config.validate();
        return 0;
    });

    const size_t axes = config.sweep.size();
    size_t total = 1;
    for (const auto& axis : config.sweep) total *= axis.values.size();

    std::vector<ResultRow> rows(total);
    const auto eval_one = [&](size_t index) {
        ScenarioConfig local = config;
        local.sweep.clear();
        // lexicographic order: the first axis varies slowest
        size_t rest = index;
        for (size_t a = axes; a-- > 0;) {
            const SweepAxis& axis = config.sweep[a];
            const size_t k = rest % axis.values.size();
            rest /= axis.values.size();
            find_setter(axis.path, config.engine)(local, axis.values[k]);
        }
        try {
            rows[index] = run_scenario(local);
        } catch (const Error& e) {
            ResultRow row;
            echo_inputs(row, local);
            const std::string what = e.what();
            std::string stage_name = "unknown";
            if (what.rfind("stage '", 0) == 0) {
                const size_t end = what.find('\'', 7);
                if (end != std::string::npos) stage_name = what.substr(7, end - 7);
            }
            row.set("error", what);
            row.set("error_stage", stage_name);
            rows[index] = std::move(row);
        }
    };

    if (workers <= 1 || total <= 1) {
        for (size_t i = 0; i < total; ++i) eval_one(i);
    } else {
        std::atomic<size_t> next{0};
        const int n_threads = static_cast<int>(
            std::min<size_t>(static_cast<size_t>(workers), total));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(n_threads));
        for (int t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t i = next.fetch_add(1);
                    if (i >= total) return;
                    eval_one(i);
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    return rows;
}

// ---------------------------------------------------------------------------
// serialization

std::string render(const std::vector<ResultRow>& rows, Format format) {
    std::string out;
    if (format == Format::JsonLines) {
        for (const auto& row : rows) {
            out += '{';
            bool first = true;
            for (const auto& kv : row.fields) {
                if (!first) out += ',';
                first = false;
                out += json_escape(kv.first);
                out += ':';
                out += json_value(kv.second);
            }
            out += "}\n";
        }
        return out;
    }

    // CSV: header over the union of keys in first-appearance order
    std::vector<std::string> cols;
    std::unordered_set<std::string> seen;
    for (const auto& row : rows) {
        for (const auto& kv : row.fields) {
            if (seen.insert(kv.first).second) cols.push_back(kv.first);
        }
    }
    for (size_t i = 0; i < cols.size(); ++i) {
        if (i > 0) out += ',';
        out += csv_escape(cols[i]);
    }
    out += '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < cols.size(); ++i) {
            if (i > 0) out += ',';
            if (const ResultRow::Value* v = row.find(cols[i])) out += csv_escape(fmt(*v));
        }
        out += '\n';
    }
    return out;
}

void emit(const std::vector<ResultRow>& rows, Format format, std::ostream& out) {
    out << render(rows, format);
    if (!out) throw IoError("failed writing results to stream");
}

void emit_file(const std::vector<ResultRow>& rows, Format format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    emit(rows, format, out);
    out.flush();
    if (!out) throw IoError("failed writing output file '" + path + "'");
}

void wigner_dump(const herald::HeraldedState& state, const WignerGrid& grid, std::ostream& out) {
    if (grid.re_points < 1 || grid.im_points < 1) {
        throw ConfigError("wigner grid needs at least one point per axis");
    }
    const auto coord = [](double lo, double hi, int n, int i) {
        return n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
    };
    Eigen::MatrixXd w(grid.im_points, grid.re_points);
    double peak = -std::numeric_limits<double>::infinity();
    double peak_re = 0.0, peak_im = 0.0;
    for (int j = 0; j < grid.im_points; ++j) {
        const double im = coord(grid.im_min, grid.im_max, grid.im_points, j);
        for (int i = 0; i < grid.re_points; ++i) {
            const double re = coord(grid.re_min, grid.re_max, grid.re_points, i);
            w(j, i) = state.wigner(cplx(re, im));
            if (w(j, i) > peak) {
                peak = w(j, i);
                peak_re = re;
                peak_im = im;
            }
        }
    }
    out << "# wigner function over alpha = re + i im, " << grid.im_points << " rows (im) x "
        << grid.re_points << " columns (re)\n";
    out << "# re_axis: " << fmt(grid.re_min) << ' ' << fmt(grid.re_max) << ' ' << grid.re_points
        << '\n';
    out << "# im_axis: " << fmt(grid.im_min) << ' ' << fmt(grid.im_max) << ' ' << grid.im_points
        << '\n';
    out << "# peak: " << fmt(peak) << " at re=" << fmt(peak_re) << " im=" << fmt(peak_im) << '\n';
    for (int j = 0; j < grid.im_points; ++j) {
        for (int i = 0; i < grid.re_points; ++i) {
            if (i > 0) out << ' ';
            out << fmt(w(j, i));
        }
        out << '\n';
    }
    if (!out) throw IoError("failed writing Wigner grid to stream");
}

void wigner_dump_file(const herald::HeraldedState& state, const WignerGrid& grid,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file '" + path + "'");
    wigner_dump(state, grid, out);
}

} // namespace qng::cli
