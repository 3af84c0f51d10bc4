#pragma once

#include <map>
#include <string>
#include <vector>

#include "mcpfl/model_vector.hpp"

namespace mcpfl {

// Per-round outcome: roster with eligibility flags, dropouts, the updated
// global model and the round's metrics. dropouts is a subset of roster and
// every alpha=1 id is a roster member.
struct RoundRecord {
    int round = 0;
    std::vector<int> roster;
    std::map<int, int> alpha;
    std::vector<int> dropouts;
    ModelVector global_model;
    std::map<std::string, double> metrics;
};

}  // namespace mcpfl
