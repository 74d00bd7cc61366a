// SPDX-License-Identifier: Apache-2.0
// hda_sim: run one experiment and write its CSV table.
//
// Exit codes: 0 ok, 2 usage, 3 config, 4 numerical failure.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hda/errors.hpp"
#include "hda/harness.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumeric = 4;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hybrid digital-analog mmWave multiuser MIMO simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<int> threads;
    std::string out;
    std::vector<std::string> overrides;
    bool dump_config = false;

    for (const auto& name : hda::experiment_names()) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON scenario file")->check(CLI::ExistingFile);
        sub->add_option("--seed", seed, "master seed");
        sub->add_option("--trials", trials, "BA trials (ba-curve) or drops (se-curve)");
        sub->add_option("--out", out, "CSV output path (default stdout)");
        sub->add_option("--threads", threads, "worker threads, 0 = all cores");
        sub->add_option("--set", overrides, "override a config key, e.g. link.K=4")->take_all();
        sub->add_flag("--dump-config", dump_config, "print the resolved config as JSON and exit");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    const std::string experiment = app.get_subcommands().front()->get_name();

    hda::ScenarioConfig cfg;
    try {
        cfg = config_path.empty() ? hda::parse_config("") : hda::load_config(config_path);
        cfg.experiment = experiment;
        for (const auto& o : overrides) hda::apply_override(cfg, o);
        if (seed) cfg.seed = *seed;
        if (threads) cfg.threads = *threads;
        if (!out.empty()) cfg.output = out;
        if (trials) {
            if (experiment == "se-curve")
                cfg.drops = *trials;
            else
                cfg.ba_trials = *trials;
        }
        cfg.validate();
    } catch (const hda::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const hda::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (dump_config) {
        std::cout << hda::config_to_json(cfg);
        return 0;
    }

    try {
        const auto table = hda::run_experiment(cfg);
        if (cfg.output.empty())
            hda::write_results(table, std::cout);
        else
            hda::write_results(table, cfg.output);
    } catch (const hda::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const hda::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
