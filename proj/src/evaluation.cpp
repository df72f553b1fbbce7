#include "stilus/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "stilus/errors.hpp"

namespace stilus {

F1Scores f1_scores(const std::vector<std::string>& y_true,
                   const std::vector<std::string>& y_pred,
                   const std::vector<std::string>& classes) {
    if (y_true.empty() || y_pred.empty())
        throw EmptyEvaluationError("no predictions to evaluate");
    if (y_true.size() != y_pred.size())
        throw ShapeError("f1_scores: prediction and truth lengths differ");

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t c = 0; c < classes.size(); ++c) index[classes[c]] = c;

    F1Scores out;
    out.counts.classes = classes;
    out.counts.tp.assign(classes.size(), 0);
    out.counts.fp.assign(classes.size(), 0);
    out.counts.fn.assign(classes.size(), 0);

    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const auto t = index.find(y_true[i]);
        const auto p = index.find(y_pred[i]);
        if (t == index.end() || p == index.end())
            throw Error("label outside the declared class set: '" +
                        (t == index.end() ? y_true[i] : y_pred[i]) + "'");
        if (t->second == p->second) {
            ++out.counts.tp[t->second];
        } else {
            ++out.counts.fn[t->second];
            ++out.counts.fp[p->second];
        }
    }

    double macro_sum = 0.0;
    std::size_t tp_total = 0, fp_total = 0, fn_total = 0;
    out.per_class.reserve(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        const double denom = 2.0 * static_cast<double>(out.counts.tp[c]) +
                             static_cast<double>(out.counts.fp[c]) +
                             static_cast<double>(out.counts.fn[c]);
        const double f1 =
            denom > 0.0 ? 2.0 * static_cast<double>(out.counts.tp[c]) / denom : 0.0;
        out.per_class.push_back(f1);
        macro_sum += f1;
        tp_total += out.counts.tp[c];
        fp_total += out.counts.fp[c];
        fn_total += out.counts.fn[c];
    }
    out.macro = classes.empty() ? 0.0 : macro_sum / static_cast<double>(classes.size());
    const double micro_denom = 2.0 * static_cast<double>(tp_total) +
                               static_cast<double>(fp_total) +
                               static_cast<double>(fn_total);
    out.micro =
        micro_denom > 0.0 ? 2.0 * static_cast<double>(tp_total) / micro_denom : 0.0;
    return out;
}

McNemarResult mcnemar(const std::vector<bool>& correct_a,
                      const std::vector<bool>& correct_b) {
    if (correct_a.size() != correct_b.size())
        throw ShapeError("mcnemar: correctness vectors differ in length");

    McNemarResult r;
    for (std::size_t i = 0; i < correct_a.size(); ++i) {
        if (correct_a[i] && !correct_b[i]) ++r.b;
        if (!correct_a[i] && correct_b[i]) ++r.c;
    }
    const std::size_t n = r.b + r.c;
    if (n == 0) {
        r.p = 1.0;
        r.exact = true;
        return r;
    }

    const double diff = std::fabs(static_cast<double>(r.b) - static_cast<double>(r.c));
    r.statistic = (diff - 1.0) * (diff - 1.0) / static_cast<double>(n);

    if (n < 25) {
        // exact two-sided binomial with success probability 1/2
        r.exact = true;
        const std::size_t k = std::min(r.b, r.c);
        double tail = 0.0;
        double coeff = 1.0;  // C(n, 0)
        for (std::size_t i = 0; i <= k; ++i) {
            tail += coeff;
            coeff = coeff * static_cast<double>(n - i) / static_cast<double>(i + 1);
        }
        r.p = std::min(1.0, 2.0 * tail * std::pow(0.5, static_cast<double>(n)));
    } else {
        // survival of the chi-squared reference with one degree of freedom
        r.p = std::erfc(std::sqrt(r.statistic / 2.0));
    }
    r.significant = r.p < 0.05;
    return r;
}

std::optional<double> delta_percent(double with_score, double without_score) {
    if (without_score == 0.0) return std::nullopt;
    return 100.0 * (with_score - without_score) / without_score;
}

}  // namespace stilus
