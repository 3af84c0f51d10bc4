#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcpfl/datagen.hpp"
#include "mcpfl/learner.hpp"
#include "mcpfl/privacy.hpp"
#include "mcpfl/sched.hpp"

namespace mcpfl {

// Simulated network parameters; per-client bandwidth drives the link quality
// in the client profile.
struct NetworkModel {
    double min_bandwidth_mbps = 0.5;
    double max_bandwidth_mbps = 5.0;
    double min_latency_ms = 20.0;
    double max_latency_ms = 100.0;
    double round_timeout_ms = 60000.0;
    double link_jitter = 0.05;

    void validate() const;
};

struct ExperimentConfig {
    DataSpec data;
    ModelConfig model;
    PrivacyConfig dp;
    SchedulerConfig sched;
    NetworkModel net;

    std::size_t n_clients = 20;
    double dirichlet_beta = 0.5;
    double schema_mismatch_rate = 0.0;
    double fedprox_mu = 0.01;  // mu used by the fedprox method

    // default energy population: E0 ~ U[energy_min, energy_max], every other
    // client recharges
    double energy_min = 0.3;
    double energy_max = 1.0;
    double recharge_rate = 0.02;

    std::size_t rounds = 50;
    std::vector<std::string> methods{"fedavg", "fedprox", "multimodal_fl", "mcp_fusion"};
    std::vector<std::uint64_t> seeds{1, 2, 3};
    std::string out_dir = "out";
    bool transcript = false;

    void validate() const;  // throws ConfigError
};

// Flat "key = value" config file ('#' starts a comment). Unknown keys and
// type errors are rejected with the offending key path. Keys not present
// keep their defaults; run.methods and run.seeds take comma-separated lists.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

// Emits every key with its current value; re-parsing yields an identical
// config.
std::string emit_config(const ExperimentConfig& cfg);

}  // namespace mcpfl
