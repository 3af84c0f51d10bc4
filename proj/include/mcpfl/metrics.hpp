#pragma once

#include <vector>

#include "mcpfl/datagen.hpp"
#include "mcpfl/errors.hpp"
#include "mcpfl/fusion.hpp"
#include "mcpfl/model_vector.hpp"

namespace mcpfl {

struct EvalResult {
    double accuracy = 0.0;
    double f1 = 0.0;
    double auc = 0.0;
};

// Accuracy and F1 at threshold 0.5 (a score of exactly 0.5 counts as a
// negative prediction); AUC is the normalized Mann-Whitney U statistic with
// ties counted 0.5. Throws ConfigError when the test set is empty or, for
// AUC, single-class.
EvalResult evaluate_scores(const std::vector<double>& scores,
                           const std::vector<std::uint8_t>& labels);

EvalResult evaluate(const ModelVector& theta, const Dataset& test, const FusionPlan& plan);

}  // namespace mcpfl
