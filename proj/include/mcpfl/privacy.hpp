#pragma once

#include <limits>

#include "mcpfl/model_vector.hpp"
#include "mcpfl/random.hpp"

namespace mcpfl {

struct PrivacyConfig {
    double clip_norm = 4.0;  // sensitivity bound on the transmitted update
    double sigma = 0.0;      // gaussian noise std; 0 disables perturbation
    double dp_delta = 1e-5;
    double epsilon_max = std::numeric_limits<double>::infinity();  // inf = unbounded

    void validate() const;
};

struct BudgetState {
    std::size_t rounds_participated = 0;
    double epsilon_spent = 0.0;
};

// update * min(1, clip_norm / ||update||); output norm <= clip_norm.
ModelVector clip(const ModelVector& update, double clip_norm);

// update + n, n ~ N(0, sigma^2 I) drawn from the stream.
ModelVector perturb(const ModelVector& update, double sigma, RandomStream& stream);

// sqrt(2 R ln(1/delta)) * sensitivity / sigma. Returns +infinity when
// sigma == 0 (the no-noise budget is unbounded).
double epsilon_total(std::size_t rounds, double dp_delta, double sensitivity, double sigma);

// True when one more round of participation stays within epsilon_max.
bool gate(const BudgetState& budget, const PrivacyConfig& cfg);

// Recompute epsilon_spent from rounds_participated.
BudgetState charge(BudgetState budget, const PrivacyConfig& cfg);

}  // namespace mcpfl
