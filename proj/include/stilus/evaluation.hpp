#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace stilus {

// One-vs-rest confusion counts per class.
struct ConfusionCounts {
    std::vector<std::string> classes;
    std::vector<std::size_t> tp;
    std::vector<std::size_t> fp;
    std::vector<std::size_t> fn;
};

struct F1Scores {
    double macro = 0.0;
    double micro = 0.0;
    std::vector<double> per_class;  // aligned with `classes`
    ConfusionCounts counts;
};

// F1 = 2TP / (2TP + FP + FN) per class (0 when the denominator is 0);
// macro averages over *all* classes in `classes`, including ones absent
// from the split; micro aggregates the counts. Throws EmptyEvaluationError
// on empty input.
F1Scores f1_scores(const std::vector<std::string>& y_true,
                   const std::vector<std::string>& y_pred,
                   const std::vector<std::string>& classes);

struct McNemarResult {
    std::size_t b = 0;  // first correct, second wrong
    std::size_t c = 0;  // first wrong, second correct
    double statistic = 0.0;  // continuity-corrected (|b-c|-1)^2 / (b+c)
    double p = 1.0;
    bool exact = false;  // exact binomial path (b + c < 25)
    bool significant = false;  // p < 0.05
};

// Paired McNemar test on correctness vectors: exact two-sided binomial
// below 25 discordant pairs, continuity-corrected chi-squared otherwise.
McNemarResult mcnemar(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b);

// 100 * (with - without) / without; nullopt when the baseline is 0.
std::optional<double> delta_percent(double with_score, double without_score);

}  // namespace stilus
