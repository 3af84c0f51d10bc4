#pragma once

#include <string>
#include <vector>

#include "mcpfl/config.hpp"
#include "mcpfl/orchestrator.hpp"

namespace mcpfl {

struct CellResult {
    std::string method;
    std::uint64_t seed = 0;
    std::vector<RoundStats> rounds;  // [0] is the round-0 evaluation
    std::size_t negotiation_rejects = 0;
};

struct ExperimentResult {
    std::vector<CellResult> cells;  // method-major, config order
};

// Runs every configured method x seed cell on one shared dataset. Cells are
// independent and deterministic in (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct SweepPoint {
    double sigma = 0.0;
    double accuracy_mean = 0.0;
    double accuracy_std = 0.0;
    double f1_mean = 0.0;
    double auc_mean = 0.0;
    double epsilon_total = 0.0;  // budget after all rounds (inf when sigma=0)
};

// Privacy-utility sweep: reruns the first configured method at each sigma.
std::vector<SweepPoint> run_sigma_sweep(ExperimentConfig cfg, const std::vector<double>& sigmas);

// rounds.csv, summary.csv, fig_accuracy.csv, fig_f1.csv, fig_auc.csv,
// fig_dropout.csv (and transcripts/ when enabled).
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);

void write_sweep_csv(const std::string& out_dir, const std::vector<SweepPoint>& points);

// Final-round metric helpers used by the summary and the acceptance suite.
double final_accuracy_mean(const ExperimentResult& r, const std::string& method);
double mean_dropout_rate(const CellResult& cell);

}  // namespace mcpfl
