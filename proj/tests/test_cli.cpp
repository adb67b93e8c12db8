// Scenario orchestration and serialization: config parsing with field-path
// diagnostics, pipeline results at the published operating points, sweep
// semantics, deterministic emission, and the process exit codes of the
// installed binary.
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

#include "qng/cli.hpp"
#include "qng/covariance.hpp"
#include "qng/errors.hpp"

using namespace qng;
using namespace qng::cli;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

/// Run the built CLI binary and return its exit code.
int run_binary(const std::string& args) {
    const std::string cmd = std::string(QNG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("minimal configs overlay the published defaults") {
    const ScenarioConfig c = config_from_json("{}");
    CHECK(c.engine == Engine::Rwa);
    CHECK(c.system.g == 0.02);
    CHECK(c.system.kappa == 1.0);
    CHECK(c.pulses.size() == 1);
    CHECK(c.pulses.front().tau == 2.0);
    CHECK(c.pulses.front().sideband == Sideband::Blue);

    const ScenarioConfig f = config_from_json(R"({"engine": "freespace"})");
    CHECK(f.freespace.meas_rate == 0.0082);
    CHECK(f.freespace.gamma == 0.0054);
    CHECK(f.initial.n0 == 0.01);
    CHECK(f.pulses.front().tau == 1.0);
    CHECK(f.reference_rate == "omega_m");

    // explicit fields override the defaults, including explicit zeros
    const ScenarioConfig z = config_from_json(R"({"system": {"g": 0.0, "nbar": 2.5}})");
    CHECK(z.system.g == 0.0);
    CHECK(z.system.nbar == 2.5);
}

TEST_CASE("config validation names the offending field") {
    const auto message_of = [](const std::string& text) {
        try {
            (void)config_from_json(text);
            return std::string();
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
    };

    CHECK(message_of(R"({"systemm": {}})").find("systemm") != std::string::npos);
    CHECK(message_of(R"({"system": {"g": "big"}})").find("system.g") != std::string::npos);
    CHECK(message_of(R"({"engine": "cavity"})").find("engine") != std::string::npos);
    CHECK(message_of(R"({"pulses": [{"tau": -1}]})").find("tau") != std::string::npos);
    CHECK(message_of(R"({"sweep": [{"path": "system.oops", "values": [1]}]})")
              .find("system.oops") != std::string::npos);
    CHECK(message_of(R"({"analysis": {"witness_orders": [9]}})").find("witness_orders") !=
          std::string::npos);
    CHECK(message_of(R"({"analysis": {"depth": {"witness": "qng0"}}})").find("depth.witness") !=
          std::string::npos);

    // four sweep axes exceed the supported dimensionality
    CHECK(message_of(R"({"sweep": [
        {"path": "initial.n0", "values": [0]}, {"path": "initial.r", "values": [0]},
        {"path": "pulses.tau", "values": [1]}, {"path": "pulses.eta", "values": [1]}]})")
              .find("sweep") != std::string::npos);

    // parse failures are configuration errors too
    CHECK_THROWS_AS((void)config_from_json("{"), ConfigError);
    CHECK_THROWS_AS((void)load_config("/nonexistent/qng.json"), IoError);
}

TEST_CASE("physical system blocks derive the dimensionless rates") {
    const char* text = R"({
        "engine": "rwa",
        "system": {"physical": {
            "particle": {"radius": 44.85e-9, "density": 1850, "permittivity": 2.1},
            "tweezer": {"power": 0.1, "waist": 0.6e-6, "wavelength": 1064e-9},
            "cavity": {"frequency": 1.7704486e15, "waist": 41.1e-6, "length": 1.07e-2},
            "kappa": 603185.789
        }}
    })";
    const ScenarioConfig c = config_from_json(text);
    REQUIRE(c.physical.has_value());
    CHECK(c.system.kappa == 1.0);
    CHECK(c.system.g == doctest::Approx(0.625).epsilon(5e-3));

    // same derivation through the rates module directly
    const rates::PhysicalRates r = rates::derive_physical_rates(
        c.physical->particle, c.physical->tweezer, c.physical->cavity);
    CHECK(c.system.g == doctest::Approx(r.g / c.physical->kappa).epsilon(1e-12));

    // a cavity engine without a cavity block cannot derive its coupling
    const char* nocav = R"({
        "engine": "rwa",
        "system": {"physical": {
            "particle": {"radius": 44.85e-9, "density": 1850, "permittivity": 2.1},
            "tweezer": {"power": 0.1, "waist": 0.6e-6, "wavelength": 1064e-9},
            "kappa": 603185.789
        }}
    })";
    CHECK_THROWS_AS((void)config_from_json(nocav), ConfigError);

    // free space derives the measurement rate instead
    const char* fs = R"({
        "engine": "freespace",
        "system": {"physical": {
            "particle": {"radius": 85.75e-9, "density": 1850, "permittivity": 2.1},
            "tweezer": {"power": 59.84e-3, "waist": 0.85e-6, "wavelength": 1064e-9}
        }}
    })";
    const ScenarioConfig cf = config_from_json(fs);
    CHECK(cf.freespace.meas_rate == doctest::Approx(0.0683).epsilon(5e-3));
}

TEST_CASE("default cavity scenario heralds a near-ideal single phonon") {
    const ResultRow row = run_scenario(default_cavity_scenario());
    CHECK(row.number("q1") >= 0.95);
    CHECK(std::get<bool>(*row.find("qng1_pass")));
    CHECK(row.number("p_click") >= 1e-4);
    CHECK(row.number("p_click") <= 1e-2);
    CHECK(row.number("mean_n") > 0.99);
    CHECK(std::get<std::string>(*row.find("error")).empty());
}

TEST_CASE("free-space scenario at the published operating point passes the witness") {
    const ResultRow row = run_scenario(default_freespace_scenario());
    CHECK(row.number("q1") > 0.48);
    CHECK(std::get<bool>(*row.find("qng1_pass")));
}

TEST_CASE("pipeline errors carry the failing stage") {
    ScenarioConfig c = default_cavity_scenario();
    c.system.g = 0.0;
    std::string message;
    try {
        (void)run_scenario(c);
    } catch (const NoClickSupport& e) {
        message = e.what();
    }
    CHECK(message.find("stage 'herald'") != std::string::npos);
}

TEST_CASE("sweeps cover the Cartesian product and capture per-row errors") {
    ScenarioConfig c = default_cavity_scenario();
    c.sweep.push_back(SweepAxis{"initial.n0", {0.0, 0.1, 0.3}});
    c.sweep.push_back(SweepAxis{"pulses.eta", {1.0, 0.0}});
    const std::vector<ResultRow> rows = run_sweep(c, 1);
    REQUIRE(rows.size() == 6);

    // first axis slowest: n0 blocks of two eta values
    CHECK(rows[0].number("n0") == 0.0);
    CHECK(rows[1].number("n0") == 0.0);
    CHECK(rows[2].number("n0") == 0.1);
    CHECK(rows[5].number("n0") == 0.3);

    int failures = 0;
    for (size_t i = 0; i < rows.size(); ++i) {
        const std::string err = std::get<std::string>(*rows[i].find("error"));
        if (i % 2 == 0) {
            // eta = 1: clean evaluation
            CHECK(err.empty());
            CHECK(rows[i].number("q1") > 0.0);
        } else {
            // eta = 0: the click never fires; recorded in-row
            CHECK(!err.empty());
            CHECK(std::get<std::string>(*rows[i].find("error_stage")) == "herald");
            ++failures;
        }
    }
    CHECK(failures == 3);

    // an empty sweep is exactly one scenario run
    ScenarioConfig single = default_cavity_scenario();
    const std::string one = render(run_sweep(single, 1), Format::JsonLines);
    const std::string direct = render({run_scenario(single)}, Format::JsonLines);
    CHECK(one == direct);
}

TEST_CASE("worker count never changes the rendered output") {
    ScenarioConfig c = default_cavity_scenario();
    c.sweep.push_back(SweepAxis{"initial.n0", {0.0, 0.05, 0.1, 0.2}});
    const std::string serial = render(run_sweep(c, 1), Format::JsonLines);
    const std::string parallel = render(run_sweep(c, 3), Format::JsonLines);
    CHECK(serial == parallel);
    CHECK(serial == render(run_sweep(c, 1), Format::JsonLines)); // and reruns are byte-identical
}

TEST_CASE("csv and json-lines serialization") {
    ScenarioConfig c = default_cavity_scenario();
    const std::vector<ResultRow> rows = {run_scenario(c)};

    // one row -> header plus one data line
    const std::string csv = render(rows, Format::Csv);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind("version,engine,", 0) == 0);

    // the JSON-lines round trip preserves every field bit-exactly
    const std::string jsonl = render(rows, Format::JsonLines);
    const nlohmann::json parsed = nlohmann::json::parse(jsonl.substr(0, jsonl.find('\n')));
    size_t compared = 0;
    for (const auto& kv : rows[0].fields) {
        REQUIRE(parsed.contains(kv.first));
        if (const auto* d = std::get_if<double>(&kv.second)) {
            CHECK(parsed.at(kv.first).get<double>() == *d);
        } else if (const auto* i = std::get_if<long long>(&kv.second)) {
            CHECK(parsed.at(kv.first).get<long long>() == *i);
        } else if (const auto* b = std::get_if<bool>(&kv.second)) {
            CHECK(parsed.at(kv.first).get<bool>() == *b);
        } else {
            CHECK(parsed.at(kv.first).get<std::string>() == std::get<std::string>(kv.second));
        }
        ++compared;
    }
    CHECK(compared == rows[0].fields.size());

    // result rows refuse non-finite numbers and missing provenance
    ResultRow bad;
    bad.set("version", std::string("x"));
    bad.set("engine", std::string("rwa"));
    bad.set("value", std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(bad.validate(), NumericalError);
    ResultRow anon;
    anon.set("value", 1.0);
    CHECK_THROWS_AS(anon.validate(), Error);
}

TEST_CASE("wigner dump of the vacuum peaks at 2/pi in the grid center") {
    herald::HeraldedState vac;
    vac.components.push_back(herald::GaussComponent{1.0, FieldCM::vacuum(1).mat()});
    vac.probability = 1.0;

    WignerGrid grid; // 101 x 101 over [-4, 4]^2
    std::ostringstream out;
    wigner_dump(vac, grid, out);
    const std::string text = out.str();

    CHECK(text.find("# re_axis: -4 4 101") != std::string::npos);
    CHECK(text.find(" at re=0 im=0") != std::string::npos);
    const size_t peak_pos = text.find("# peak: ");
    REQUIRE(peak_pos != std::string::npos);
    const double peak = std::stod(text.substr(peak_pos + 8));
    CHECK(peak == doctest::Approx(2.0 / 3.14159265358979323846).epsilon(1e-14));

    // 4 header lines + 101 data rows of 101 values
    std::istringstream lines(text);
    std::string line;
    int headers = 0, data_rows = 0;
    while (std::getline(lines, line)) {
        if (line.rfind('#', 0) == 0) {
            ++headers;
            continue;
        }
        ++data_rows;
        std::istringstream cells(line);
        double v = 0.0;
        int n = 0;
        while (cells >> v) ++n;
        CHECK(n == 101);
    }
    CHECK(headers == 4);
    CHECK(data_rows == 101);
}

TEST_CASE("multipulse configs run through the same pipeline") {
    const ScenarioConfig c = config_from_json(R"({
        "pulses": [{"sideband": "blue", "tau": 2.0}, {"sideband": "blue", "tau": 2.0}],
        "analysis": {"witness_orders": [2]}
    })");
    const ResultRow row = run_scenario(c);
    CHECK(row.number("pulses") == 2);
    CHECK(row.number("q2") > 0.5); // two heralded additions from the ground state
    CHECK(row.find("qng2_pass") != nullptr);
}

TEST_CASE("the installed binary maps failure classes onto exit codes") {
    const std::string dir = "/tmp/qng_cli_test";
    const int made = std::system(("mkdir -p " + dir).c_str());
    REQUIRE(made == 0);

    CHECK(run_binary("herald --out " + dir + "/ok.jsonl") == 0);
    CHECK(run_binary("herald --config /nonexistent/qng.json") == 3);

    spit(dir + "/bad.json", R"({"unknown_section": 1})");
    CHECK(run_binary("herald --config " + dir + "/bad.json") == 1);

    spit(dir + "/g0.json", R"({"system": {"g": 0.0}})");
    CHECK(run_binary("herald --config " + dir + "/g0.json") == 2);

    CHECK(run_binary("") == 1); // a subcommand is required

    // identical invocations produce byte-identical files
    spit(dir + "/sweep.json",
         R"({"sweep": [{"path": "initial.n0", "values": [0.0, 0.1]}]})");
    CHECK(run_binary("sweep --config " + dir + "/sweep.json --out " + dir + "/a.jsonl") == 0);
    CHECK(run_binary("sweep --config " + dir + "/sweep.json --out " + dir + "/b.jsonl") == 0);
    const std::string a = slurp(dir + "/a.jsonl");
    CHECK(!a.empty());
    CHECK(a == slurp(dir + "/b.jsonl"));
}
