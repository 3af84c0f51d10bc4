#include "mcpfl/privacy.hpp"

#include <cmath>

namespace mcpfl {

void PrivacyConfig::validate() const {
    if (clip_norm <= 0.0) throw ConfigError("dp.clip_norm must be > 0");
    if (sigma < 0.0) throw ConfigError("dp.sigma must be >= 0");
    if (dp_delta <= 0.0 || dp_delta >= 1.0) throw ConfigError("dp.delta must be in (0,1)");
    if (epsilon_max <= 0.0) throw ConfigError("dp.epsilon_max must be > 0");
}

ModelVector clip(const ModelVector& update, double clip_norm) {
    if (clip_norm <= 0.0) throw ConfigError("clip_norm must be > 0");
    double norm = l2_norm(update);
    if (norm <= clip_norm) return update;
    return vec_scale(clip_norm / norm, update);
}

ModelVector perturb(const ModelVector& update, double sigma, RandomStream& stream) {
    if (sigma == 0.0) return update;
    ModelVector out = update;
    for (double& v : out.values) v += sigma * stream.next_gaussian();
    return out;
}

double epsilon_total(std::size_t rounds, double dp_delta, double sensitivity, double sigma) {
    if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
    if (rounds == 0) return 0.0;
    return std::sqrt(2.0 * static_cast<double>(rounds) * std::log(1.0 / dp_delta)) * sensitivity /
           sigma;
}

bool gate(const BudgetState& budget, const PrivacyConfig& cfg) {
    if (std::isinf(cfg.epsilon_max)) return true;
    double next = epsilon_total(budget.rounds_participated + 1, cfg.dp_delta, cfg.clip_norm,
                                cfg.sigma);
    return next <= cfg.epsilon_max;
}

BudgetState charge(BudgetState budget, const PrivacyConfig& cfg) {
    budget.rounds_participated += 1;
    budget.epsilon_spent =
        epsilon_total(budget.rounds_participated, cfg.dp_delta, cfg.clip_norm, cfg.sigma);
    return budget;
}

}  // namespace mcpfl
