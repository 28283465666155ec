#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "nematic/scenarios.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::size_t jobs = 1;
};

int execute(nematic::Scenario scenario, const Options& opt) {
    using namespace nematic;
    ExperimentConfig cfg;
    try {
        cfg = opt.config.empty() ? default_config(scenario) : load_config(opt.config, scenario);
        if (!opt.out.empty()) cfg.out_dir = opt.out;
        cfg.validate();
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    try {
        const Summary s = run_scenario(cfg, opt.jobs);
        s.write(std::cout);
        return s.all_pass() ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    using nematic::Scenario;
    CLI::App app{"Drifted harmonic-map flow laboratory"};
    app.require_subcommand(1);
    Options opt;

    const std::pair<const char*, Scenario> commands[] = {
        {"solve", Scenario::global_existence}, {"barrier-audit", Scenario::barrier_audit},
        {"blowup", Scenario::blowup},          {"energy", Scenario::energy_ledger},
        {"hopf", Scenario::hopf_sweep},        {"mms", Scenario::mms_convergence},
    };
    std::optional<Scenario> chosen;
    for (const auto& [name, scen] : commands) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + nematic::to_string(scen) + " scenario");
        sub->add_option("--config", opt.config, "INI configuration file");
        sub->add_option("--out", opt.out, "output directory (overrides run.out)");
        sub->add_option("--jobs", opt.jobs, "parallel sweep cells")->check(CLI::PositiveNumber);
        sub->callback([&chosen, scen = scen] { chosen = scen; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return execute(*chosen, opt);
}
