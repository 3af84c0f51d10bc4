#pragma once

#include <string>
#include <vector>

#include "mcpfl/errors.hpp"
#include "mcpfl/random.hpp"

namespace mcpfl {

struct ClientProfile {
    int id = -1;
    double energy = 1.0;            // normalized battery in [0,1]
    double depletion_est = 0.0;     // EMA of recent per-round depletion
    double link = 1.0;              // normalized bandwidth in [0,1]
    int staleness = 0;              // rounds since last successful participation
    double recharge_rate = 0.0;
    double train_cost = 0.05;
    double comm_cost_per_mb = 0.01;
};

enum class Policy { energy_aware, random_k, all };

Policy policy_from_name(const std::string& name);  // throws ConfigError
const char* policy_name(Policy p);

struct SchedulerConfig {
    double tau = 0.1;    // energy threshold
    double gamma = 0.2;  // link threshold
    int eta = 3;         // staleness cap
    Policy policy = Policy::energy_aware;
    double dropout_kappa = 0.5;
    std::size_t random_k = 10;
    bool staleness_readmit = false;  // re-admit when staleness > 2*eta

    void validate() const;
};

enum class Participation { idle, dropped, completed };

// The eligibility indicator: 1 iff energy - depletion >= tau, link >= gamma
// and staleness <= eta. Policies random_k and all bypass the test.
bool eligibility(const ClientProfile& p, const SchedulerConfig& cfg);

// Round roster per policy: energy_aware takes every eligible client, random_k
// a uniform sample of k, all takes everyone. An empty result is the
// EmptyRound signal (the caller records the round with no update).
std::vector<int> select_round(const std::vector<ClientProfile>& profiles,
                              const SchedulerConfig& cfg, RandomStream& stream);

// Mid-round dropout: drops with probability min(0.9, kappa * dE / max(E, 1e-6)).
bool survives_round(const ClientProfile& p, const SchedulerConfig& cfg, RandomStream& stream);

// Post-round energy/staleness bookkeeping for one client.
ClientProfile step_energy(ClientProfile p, Participation outcome, double mb_sent);

}  // namespace mcpfl
