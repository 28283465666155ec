#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "nematic/barriers.hpp"
#include "nematic/errors.hpp"
#include "nematic/flow_solver.hpp"

namespace nematic {

/// Raised for unreadable, malformed or invalid configuration (exit status 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

enum class Scenario { global_existence, blowup, barrier_audit, energy_ledger, hopf_sweep, mms_convergence };

inline const char* to_string(Scenario s) {
    switch (s) {
    case Scenario::global_existence: return "global_existence";
    case Scenario::blowup: return "blowup";
    case Scenario::barrier_audit: return "barrier_audit";
    case Scenario::energy_ledger: return "energy_ledger";
    case Scenario::hopf_sweep: return "hopf_sweep";
    case Scenario::mms_convergence: return "mms_convergence";
    }
    return "unknown";
}

inline Scenario parse_scenario(const std::string& s) {
    for (auto v : {Scenario::global_existence, Scenario::blowup, Scenario::barrier_audit, Scenario::energy_ledger,
                   Scenario::hopf_sweep, Scenario::mms_convergence}) {
        if (s == to_string(v)) return v;
    }
    throw ConfigError("unknown scenario '" + s + "'");
}

struct GridSettings {
    std::size_t cells = 800;
    double grading = 2.0;
};

struct EnergySettings {
    std::size_t quadrature = 256;
    double c1 = 0.0;
    double c2 = 0.0;
    /// Gauge shift applied to check invariance of the boundary flux.
    double gauge_shift = 1.0;
};

struct HopfSettings {
    std::vector<double> lambdas{1, 2, 4, 8, 16, 32, 64};
    std::size_t quadrature = 64;
    std::size_t ball_quadrature = 32;
    std::size_t sample_resolution = 16;
    double eps0 = 2.0;
};

struct MmsSettings {
    std::vector<std::size_t> cells{100, 200, 400};
    double t_end = 0.1;
    double dt = 1e-4;
    double min_order = 1.9;
};

struct ExperimentConfig {
    Scenario scenario = Scenario::global_existence;
    std::filesystem::path out_dir = "out";
    GridSettings grid;
    SolverConfig solver;
    double t_end = 2.0;
    /// Amplitude A of the global-existence data A sin(pi r / 2).
    double amplitude = std::numbers::pi;
    BarrierParams barrier = validated_params();
    /// Ordering tolerance for the comparison check.
    double comparison_tol = 1e-3;
    /// Allowed lateness of the detection time past T0.
    double detect_margin = 0.05;
    /// Number of profile CSVs written per run.
    std::size_t profile_count = 10;
    EnergySettings energy;
    HopfSettings hopf;
    MmsSettings mms;

    void validate() const;
};

/// Defaults of each scenario before any file overrides.
inline ExperimentConfig default_config(Scenario s) {
    ExperimentConfig c;
    c.scenario = s;
    c.out_dir = std::filesystem::path("out") / to_string(s);
    switch (s) {
    case Scenario::global_existence:
    case Scenario::energy_ledger:
        c.grid = {800, 2.0};
        c.t_end = 2.0;
        c.solver.snapshot_interval = 0.1;
        break;
    case Scenario::blowup:
        // The bubble has width beta0 ~ 1.5e-5: strong grading and tiny first
        // steps resolve it; the threshold sits well above phi_r(0,0) = 2/beta0.
        c.grid = {1600, 4.0};
        c.t_end = 1.0;
        c.solver.dt_init = 1e-14;
        c.solver.dt_min = 1e-16;
        c.solver.monitor_threshold = 1e7;
        break;
    case Scenario::barrier_audit:
        c.grid = {2048, 1.0};
        break;
    default: break;
    }
    return c;
}

inline void ExperimentConfig::validate() const {
    try {
        if (grid.cells < 2) throw ConfigError("grid.cells must be >= 2");
        if (!(grid.grading >= 1.0)) throw ConfigError("grid.grading must be >= 1");
        solver.validate();
        if (!(t_end > 0.0)) throw ConfigError("solver.t_end must be > 0");
        barrier.validate();
        if (!(comparison_tol >= 0.0)) throw ConfigError("checks.comparison_tol must be >= 0");
        if (!(detect_margin >= 0.0)) throw ConfigError("checks.detect_margin must be >= 0");
        if (energy.quadrature < 16 || energy.quadrature % 2 != 0) {
            throw ConfigError("energy.quadrature must be an even number >= 16");
        }
        if (hopf.lambdas.empty()) throw ConfigError("hopf.lambdas must not be empty");
        for (double l : hopf.lambdas)
            if (!(l >= 1.0)) throw ConfigError("hopf.lambdas entries must be >= 1");
        if (hopf.quadrature < 16 || hopf.ball_quadrature < 16) throw ConfigError("hopf quadrature must be >= 16");
        if (hopf.sample_resolution < 4) throw ConfigError("hopf.sample_resolution must be >= 4");
        if (!(hopf.eps0 > 0.0)) throw ConfigError("hopf.eps0 must be > 0");
        if (mms.cells.size() < 2) throw ConfigError("mms.cells needs at least two resolutions");
        for (std::size_t n : mms.cells)
            if (n < 2) throw ConfigError("mms.cells entries must be >= 2");
        if (!(mms.dt > 0.0 && mms.t_end > 0.0)) throw ConfigError("mms.dt and mms.t_end must be > 0");
        if (!(amplitude >= 0.0)) throw ConfigError("initial.amplitude must be >= 0");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
}

namespace config_detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key + ": expected a real number, got '" + raw + "'");
    }
    return v;
}

inline std::size_t to_size(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError(key + ": expected a non-negative integer, got '" + raw + "'");
    }
    return v;
}

template <typename T, typename Conv>
std::vector<T> to_list(const std::string& key, const std::string& raw, Conv conv) {
    std::vector<T> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(conv(key, item));
    if (out.empty()) throw ConfigError(key + ": empty list");
    return out;
}

} // namespace config_detail

/**
 * Reads an INI file. Sections and keys:
 *
 *   [run]      scenario, out
 *   [grid]     cells, grading
 *   [solver]   dt_init, dt_min, dt_max, theta_scheme, step_tolerance,
 *              monitor_threshold, snapshot_interval, t_end
 *   [initial]  amplitude
 *   [barrier]  eps, mu, delta, beta0, phi1
 *   [checks]   comparison_tol, detect_margin, profile_count
 *   [energy]   quadrature, c1, c2, gauge_shift
 *   [hopf]     lambdas, quadrature, ball_quadrature, sample_resolution, eps0
 *   [mms]      cells, t_end, dt, min_order
 *
 * Unknown sections or keys are rejected. When `expected` is given, the file's
 * scenario (if any) must match it; defaults are those of the scenario.
 */
inline ExperimentConfig load_config(const std::filesystem::path& path, std::optional<Scenario> expected = {}) {
    namespace pt = boost::property_tree;
    using namespace config_detail;
    pt::ptree tree;
    try {
        pt::read_ini(path.string(), tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("cannot parse config: ") + e.what());
    }

    std::optional<Scenario> declared;
    if (auto run = tree.get_child_optional("run")) {
        if (auto s = run->get_optional<std::string>("scenario")) declared = parse_scenario(trim(*s));
    }
    if (expected && declared && *expected != *declared) {
        throw ConfigError(std::string("config scenario '") + to_string(*declared) + "' does not match subcommand scenario '" +
                          to_string(*expected) + "'");
    }
    if (!expected && !declared) throw ConfigError("run.scenario is required");
    ExperimentConfig c = default_config(declared ? *declared : *expected);

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, std::map<std::string, Setter>> schema{
        {"run",
         {{"scenario", [](auto&, auto&) {}},
          {"out", [&](auto&, const std::string& v) { c.out_dir = trim(v); }}}},
        {"grid",
         {{"cells", [&](auto& k, auto& v) { c.grid.cells = to_size(k, v); }},
          {"grading", [&](auto& k, auto& v) { c.grid.grading = to_double(k, v); }}}},
        {"solver",
         {{"dt_init", [&](auto& k, auto& v) { c.solver.dt_init = to_double(k, v); }},
          {"dt_min", [&](auto& k, auto& v) { c.solver.dt_min = to_double(k, v); }},
          {"dt_max", [&](auto& k, auto& v) { c.solver.dt_max = to_double(k, v); }},
          {"theta_scheme", [&](auto& k, auto& v) { c.solver.theta_scheme = to_double(k, v); }},
          {"step_tolerance", [&](auto& k, auto& v) { c.solver.step_tolerance = to_double(k, v); }},
          {"monitor_threshold", [&](auto& k, auto& v) { c.solver.monitor_threshold = to_double(k, v); }},
          {"snapshot_interval", [&](auto& k, auto& v) { c.solver.snapshot_interval = to_double(k, v); }},
          {"t_end", [&](auto& k, auto& v) { c.t_end = to_double(k, v); }}}},
        {"initial", {{"amplitude", [&](auto& k, auto& v) { c.amplitude = to_double(k, v); }}}},
        {"barrier",
         {{"eps", [&](auto& k, auto& v) { c.barrier.eps = to_double(k, v); }},
          {"mu", [&](auto& k, auto& v) { c.barrier.mu = to_double(k, v); }},
          {"delta", [&](auto& k, auto& v) { c.barrier.delta = to_double(k, v); }},
          {"beta0", [&](auto& k, auto& v) { c.barrier.beta0 = to_double(k, v); }},
          {"phi1", [&](auto& k, auto& v) { c.barrier.phi1 = to_double(k, v); }}}},
        {"checks",
         {{"comparison_tol", [&](auto& k, auto& v) { c.comparison_tol = to_double(k, v); }},
          {"detect_margin", [&](auto& k, auto& v) { c.detect_margin = to_double(k, v); }},
          {"profile_count", [&](auto& k, auto& v) { c.profile_count = to_size(k, v); }}}},
        {"energy",
         {{"quadrature", [&](auto& k, auto& v) { c.energy.quadrature = to_size(k, v); }},
          {"c1", [&](auto& k, auto& v) { c.energy.c1 = to_double(k, v); }},
          {"c2", [&](auto& k, auto& v) { c.energy.c2 = to_double(k, v); }},
          {"gauge_shift", [&](auto& k, auto& v) { c.energy.gauge_shift = to_double(k, v); }}}},
        {"hopf",
         {{"lambdas", [&](auto& k, auto& v) { c.hopf.lambdas = to_list<double>(k, v, to_double); }},
          {"quadrature", [&](auto& k, auto& v) { c.hopf.quadrature = to_size(k, v); }},
          {"ball_quadrature", [&](auto& k, auto& v) { c.hopf.ball_quadrature = to_size(k, v); }},
          {"sample_resolution", [&](auto& k, auto& v) { c.hopf.sample_resolution = to_size(k, v); }},
          {"eps0", [&](auto& k, auto& v) { c.hopf.eps0 = to_double(k, v); }}}},
        {"mms",
         {{"cells", [&](auto& k, auto& v) { c.mms.cells = to_list<std::size_t>(k, v, to_size); }},
          {"t_end", [&](auto& k, auto& v) { c.mms.t_end = to_double(k, v); }},
          {"dt", [&](auto& k, auto& v) { c.mms.dt = to_double(k, v); }},
          {"min_order", [&](auto& k, auto& v) { c.mms.min_order = to_double(k, v); }}}},
    };

    for (const auto& [section, body] : tree) {
        const auto sec = schema.find(section);
        if (sec == schema.end()) throw ConfigError("unknown config section [" + section + "]");
        if (!body.data().empty()) throw ConfigError("key '" + section + "' outside of a section");
        for (const auto& [key, node] : body) {
            const auto it = sec->second.find(key);
            if (it == sec->second.end()) throw ConfigError("unknown config key " + section + "." + key);
            it->second(section + "." + key, node.data());
        }
    }
    c.validate();
    return c;
}

} // namespace nematic
