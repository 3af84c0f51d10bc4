#include "mcpfl/sched.hpp"

#include <algorithm>
#include <cmath>

namespace mcpfl {

Policy policy_from_name(const std::string& name) {
    if (name == "energy_aware") return Policy::energy_aware;
    if (name == "random_k") return Policy::random_k;
    if (name == "all") return Policy::all;
    throw ConfigError("unknown scheduler policy: " + name);
}

const char* policy_name(Policy p) {
    switch (p) {
        case Policy::energy_aware: return "energy_aware";
        case Policy::random_k: return "random_k";
        case Policy::all: return "all";
    }
    return "?";
}

void SchedulerConfig::validate() const {
    if (tau < 0.0 || tau > 1.0) throw ConfigError("sched.tau must be in [0,1]");
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("sched.gamma must be in [0,1]");
    if (eta < 0) throw ConfigError("sched.eta must be >= 0");
    if (dropout_kappa < 0.0) throw ConfigError("sched.kappa must be >= 0");
    if (random_k == 0) throw ConfigError("sched.random_k must be >= 1");
}

bool eligibility(const ClientProfile& p, const SchedulerConfig& cfg) {
    if (cfg.policy != Policy::energy_aware) return true;
    bool energy_ok = p.energy - p.depletion_est >= cfg.tau;
    bool link_ok = p.link >= cfg.gamma;
    bool fresh = p.staleness <= cfg.eta;
    if (cfg.staleness_readmit && p.staleness > 2 * cfg.eta) fresh = true;
    return energy_ok && link_ok && fresh;
}

std::vector<int> select_round(const std::vector<ClientProfile>& profiles,
                              const SchedulerConfig& cfg, RandomStream& stream) {
    if (profiles.empty()) throw ConfigError("select_round: no client profiles");

    std::vector<int> roster;
    switch (cfg.policy) {
        case Policy::all:
            for (const auto& p : profiles) roster.push_back(p.id);
            break;
        case Policy::energy_aware:
            for (const auto& p : profiles)
                if (eligibility(p, cfg)) roster.push_back(p.id);
            break;
        case Policy::random_k: {
            std::vector<int> ids;
            for (const auto& p : profiles) ids.push_back(p.id);
            stream.shuffle(ids);
            ids.resize(std::min(cfg.random_k, ids.size()));
            roster = std::move(ids);
            break;
        }
    }
    std::sort(roster.begin(), roster.end());
    return roster;
}

bool survives_round(const ClientProfile& p, const SchedulerConfig& cfg, RandomStream& stream) {
    double p_drop = std::min(0.9, cfg.dropout_kappa * p.depletion_est / std::max(p.energy, 1e-6));
    return stream.next_double() >= p_drop;
}

ClientProfile step_energy(ClientProfile p, Participation outcome, double mb_sent) {
    double spent = 0.0;
    if (outcome == Participation::completed)
        spent = p.train_cost + p.comm_cost_per_mb * mb_sent;
    else if (outcome == Participation::dropped)
        spent = p.train_cost;  // training energy was burned before the drop

    p.energy = std::clamp(p.energy - spent + p.recharge_rate, 0.0, 1.0);
    p.depletion_est = 0.5 * p.depletion_est + 0.5 * spent;
    p.staleness = (outcome == Participation::completed) ? 0 : p.staleness + 1;
    return p;
}

}  // namespace mcpfl
