#include "mcpfl/metrics.hpp"

#include <algorithm>

#include "mcpfl/learner.hpp"

namespace mcpfl {

EvalResult evaluate_scores(const std::vector<double>& scores,
                           const std::vector<std::uint8_t>& labels) {
    if (scores.empty() || scores.size() != labels.size())
        throw ConfigError("evaluate: empty or mismatched test set");

    std::size_t tp = 0, fp = 0, fn = 0, correct = 0, pos = 0, neg = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        bool pred = scores[i] > 0.5;
        bool truth = labels[i] != 0;
        if (pred == truth) ++correct;
        if (pred && truth) ++tp;
        if (pred && !truth) ++fp;
        if (!pred && truth) ++fn;
        truth ? ++pos : ++neg;
    }
    if (pos == 0 || neg == 0) throw ConfigError("evaluate: AUC undefined on single-class test set");

    EvalResult r;
    r.accuracy = static_cast<double>(correct) / static_cast<double>(scores.size());
    double denom = 2.0 * tp + fp + fn;
    r.f1 = denom > 0.0 ? 2.0 * tp / denom : 0.0;

    // rank-sum AUC; ties share averaged ranks
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < scores.size(); ++k)
        if (labels[k] != 0) rank_sum_pos += rank[k];
    r.auc = (rank_sum_pos - 0.5 * pos * (pos + 1)) / (static_cast<double>(pos) * neg);
    return r;
}

EvalResult evaluate(const ModelVector& theta, const Dataset& test, const FusionPlan& plan) {
    std::vector<double> scores;
    scores.reserve(test.n());
    for (std::size_t row = 0; row < test.n(); ++row)
        scores.push_back(forward(test, row, theta, plan));
    return evaluate_scores(scores, test.labels);
}

}  // namespace mcpfl
