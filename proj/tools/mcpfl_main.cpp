#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mcpfl/config.hpp"
#include "mcpfl/experiment.hpp"

using namespace mcpfl;

namespace {

std::vector<double> parse_sweep_arg(const std::string& arg) {
    const std::string prefix = "dp.sigma=";
    if (arg.rfind(prefix, 0) != 0)
        throw ConfigError("--sweep only supports dp.sigma=v1,v2,... (got '" + arg + "')");
    std::vector<double> sigmas;
    std::string rest = arg.substr(prefix.size());
    std::size_t pos = 0;
    while (pos != std::string::npos) {
        auto comma = rest.find(',', pos);
        std::string tok = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            sigmas.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ConfigError("--sweep: bad sigma value '" + tok + "'");
        }
        pos = comma == std::string::npos ? comma : comma + 1;
    }
    if (sigmas.empty()) throw ConfigError("--sweep: empty sigma list");
    return sigmas;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic simulator for secure multi-modal federated fusion"};

    std::string config_path, out_dir, methods_arg, seeds_arg, sweep_arg;
    long long rounds = -1;
    bool transcript = false;
    bool print_defaults = false;

    app.add_option("--config", config_path, "Config file (key = value lines)");
    app.add_option("--methods", methods_arg, "Comma-separated method list");
    app.add_option("--seeds", seeds_arg, "Comma-separated seed list");
    app.add_option("--rounds", rounds, "Number of federated rounds");
    app.add_option("--sweep", sweep_arg, "Privacy sweep, e.g. dp.sigma=0.25,0.5,1,2,4");
    app.add_option("--out", out_dir, "Output directory");
    app.add_flag("--transcript", transcript, "Dump per-run wire transcripts");
    app.add_flag("--print-defaults", print_defaults, "Print the default config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (print_defaults) {
            std::cout << emit_config(ExperimentConfig{});
            return 0;
        }

        ExperimentConfig cfg =
            config_path.empty() ? ExperimentConfig{} : parse_config(config_path);
        if (!methods_arg.empty()) {
            cfg.methods.clear();
            std::size_t pos = 0;
            while (pos != std::string::npos) {
                auto comma = methods_arg.find(',', pos);
                cfg.methods.push_back(
                    methods_arg.substr(pos, comma == std::string::npos ? comma : comma - pos));
                pos = comma == std::string::npos ? comma : comma + 1;
            }
        }
        if (!seeds_arg.empty()) {
            cfg.seeds.clear();
            std::size_t pos = 0;
            while (pos != std::string::npos) {
                auto comma = seeds_arg.find(',', pos);
                std::string tok =
                    seeds_arg.substr(pos, comma == std::string::npos ? comma : comma - pos);
                cfg.seeds.push_back(std::stoull(tok));
                pos = comma == std::string::npos ? comma : comma + 1;
            }
        }
        if (rounds >= 0) cfg.rounds = static_cast<std::size_t>(rounds);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (transcript) cfg.transcript = true;
        for (const auto& m : cfg.methods) method_config(m, cfg.fedprox_mu);  // fail fast
        cfg.validate();

        if (!sweep_arg.empty()) {
            auto sigmas = parse_sweep_arg(sweep_arg);
            auto points = run_sigma_sweep(cfg, sigmas);
            write_sweep_csv(cfg.out_dir, points);
            std::cout << "wrote " << cfg.out_dir << "/fig_privacy.csv\n";
            return 0;
        }

        ExperimentResult result = run_experiment(cfg);
        write_outputs(cfg, result);
        std::cout << "wrote " << cfg.out_dir << "/rounds.csv and summary/figure files\n";
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
