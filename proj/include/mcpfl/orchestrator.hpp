#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcpfl/config.hpp"
#include "mcpfl/datagen.hpp"
#include "mcpfl/fusion.hpp"
#include "mcpfl/learner.hpp"
#include "mcpfl/metrics.hpp"
#include "mcpfl/privacy.hpp"
#include "mcpfl/round_record.hpp"
#include "mcpfl/sched.hpp"
#include "mcpfl/secagg.hpp"
#include "mcpfl/wire.hpp"

namespace mcpfl {

// Which pipeline stages a method enables and which modalities it sees.
struct MethodConfig {
    std::string name;
    std::vector<Modality> modalities;
    bool use_schema_negotiation = false;
    bool use_secagg = false;
    bool use_dp = false;
    bool use_energy_scheduler = false;
    bool dp_no_clip = false;  // the naive DP baseline adds noise without clipping
    double fedprox_mu = 0.0;
    Policy policy = Policy::random_k;
};

// Baseline matrix:
//   fedavg (alias fedavg_im), fedavg_emr, fedavg_iot - unimodal, random
//     selection, everything off
//   fedprox              - fedavg plus the proximal term
//   multimodal_fl        - fusion on, negotiation/secagg/dp/scheduler off
//   mcp_fusion           - every stage on, energy-aware scheduling
// Ablations: mcp_no_negotiation, mcp_no_secagg, mcp_no_dp, mcp_no_sched;
// naive_dp is mcp_fusion with clip-free noise of equal sigma.
MethodConfig method_config(const std::string& name, double fedprox_mu);

struct RoundStats {
    EvalResult eval;
    std::size_t roster_size = 0;
    std::size_t dropouts = 0;
    double dropout_rate = 0.0;
    double epsilon_spent_max = 0.0;
    std::size_t bytes = 0;
    double wall_ms = 0.0;
    bool empty_round = false;
};

// One (method, seed) simulation: owns the client datasets, profiles, budgets
// and the global model, and advances round by round. Data generation uses
// the data seed (shared across methods); everything stochastic in the run
// (schedules, shuffles, masks, noise, dropouts) derives from the run seed.
class Simulation {
public:
    Simulation(const ExperimentConfig& cfg, const MethodConfig& method, std::uint64_t run_seed,
               const SplitDataset* shared_data = nullptr);

    // Executes one round: select, (gate), train, clip+perturb, encode+mask,
    // dropout simulation with abort-retry, aggregate, apply, bookkeeping,
    // evaluate.
    RoundStats run_round();

    // Runs all configured rounds; result[0] is the round-0 evaluation of the
    // initial model.
    std::vector<RoundStats> run_all();

    const ModelVector& global_model() const { return theta_; }
    const Transcript& transcript() const { return transcript_; }
    const std::vector<RoundRecord>& history() const { return history_; }
    const std::vector<ClientProfile>& profiles() const { return profiles_; }
    std::size_t negotiation_rejects() const { return negotiation_rejects_; }
    std::size_t admitted_count() const;
    int current_round() const { return round_; }

    RoundStats evaluate_current() const;

private:
    RandomStream stream(const std::string& tag) const;
    void negotiate_population();
    void init_profiles();

    ExperimentConfig cfg_;
    MethodConfig method_;
    std::uint64_t run_seed_;

    SplitDataset owned_data_;
    const Dataset* test_ = nullptr;
    std::vector<Dataset> client_data_;

    FusionPlan server_plan_;              // all modalities supported; drives eval
    std::vector<std::optional<FusionPlan>> client_plans_;  // nullopt = rejected
    LayoutPtr layout_;

    std::vector<ClientProfile> profiles_;
    std::vector<double> base_link_;
    std::vector<double> bandwidth_mbps_;
    std::vector<double> latency_ms_;
    std::vector<BudgetState> budgets_;

    ModelVector theta_;
    int round_ = 0;
    std::vector<RoundRecord> history_;
    Transcript transcript_;
    std::size_t negotiation_rejects_ = 0;
};

}  // namespace mcpfl
