#include "stilus/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "stilus/errors.hpp"
#include "stilus/rng.hpp"

namespace stilus {

namespace {

// Dual coordinate descent for the L2-regularized squared-hinge binary SVM
// (Hsieh et al., ICML 2008, algorithm 3):
//
//   min_a  1/2 a^T (Q + D) a - e^T a,   0 <= a_i,  D_ii = 1 / (2C)
//
// with shrinking driven by the projected gradient. The intercept is an
// augmented feature of value bias_scale.
std::vector<double> solve_binary(const FeatureMatrix& x, const std::vector<int>& y,
                                 double c, const TrainOptions& opt,
                                 std::uint64_t rng_seed) {
    const std::size_t l = x.rows();
    const std::size_t w_size = x.cols() + 1;  // + bias column
    const double diag = 0.5 / c;
    const double bias = opt.bias_scale;

    std::vector<double> w(w_size, 0.0);
    std::vector<double> alpha(l, 0.0);
    std::vector<double> qd(l);
    std::vector<std::size_t> index(l);
    for (std::size_t i = 0; i < l; ++i) {
        double sq = bias * bias;
        for (const auto& [col, v] : x.row(i)) sq += v * v;
        qd[i] = diag + sq;
        index[i] = i;
    }

    SplitMix64 rng(rng_seed);
    std::size_t active = l;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // Only the lower bound exists for the squared hinge (no upper cap on
    // alpha), so shrinking watches pg_max alone.
    double pg_max_old = kInf;

    for (int iter = 0; iter < opt.max_iterations; ++iter) {
        double pg_max_new = -kInf;
        double pg_min_new = kInf;

        for (std::size_t i = 0; i + 1 < active; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(active - i));
            std::swap(index[i], index[j]);
        }

        for (std::size_t s = 0; s < active; ++s) {
            const std::size_t i = index[s];
            const double yi = y[i];

            double g = bias * w[w_size - 1];
            for (const auto& [col, v] : x.row(i)) g += v * w[col];
            g = yi * g - 1.0 + alpha[i] * diag;

            double pg = g;
            if (alpha[i] == 0.0) {
                if (g > pg_max_old) {
                    --active;
                    std::swap(index[s], index[active]);
                    --s;
                    continue;
                }
                if (g >= 0.0) pg = 0.0;
            }
            pg_max_new = std::max(pg_max_new, pg);
            pg_min_new = std::min(pg_min_new, pg);

            if (std::fabs(pg) > 1.0e-12) {
                const double old = alpha[i];
                alpha[i] = std::max(old - g / qd[i], 0.0);
                const double d = (alpha[i] - old) * yi;
                for (const auto& [col, v] : x.row(i)) w[col] += d * v;
                w[w_size - 1] += d * bias;
            }
        }

        if (pg_max_new - pg_min_new <= opt.tolerance) {
            if (active == l) break;
            active = l;  // re-check the shrunk variables before stopping
            pg_max_old = kInf;
            continue;
        }
        pg_max_old = pg_max_new <= 0.0 ? kInf : pg_max_new;
    }
    return w;
}

}  // namespace

LinearModel train(const FeatureMatrix& x, const std::vector<std::string>& labels,
                  double c, const TrainOptions& options) {
    if (x.rows() != labels.size())
        throw ShapeError("train: " + std::to_string(x.rows()) + " rows but " +
                         std::to_string(labels.size()) + " labels");

    LinearModel model;
    model.c = c;
    model.classes = labels;
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                        model.classes.end());
    if (model.classes.size() < 2)
        throw DegenerateLabelsError("training labels contain fewer than two classes");

    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i)
            y[i] = labels[i] == model.classes[k] ? 1 : -1;
        std::vector<double> w =
            solve_binary(x, y, c, options, 0x5eedULL + k * 0x9e3779b97f4a7c15ULL);
        model.intercepts.push_back(w.back() * options.bias_scale);
        w.pop_back();
        model.weights.push_back(std::move(w));
    }
    return model;
}

std::vector<double> decision_values(const LinearModel& model, const FeatureMatrix& x,
                                    std::size_t row) {
    std::vector<double> values(model.classes.size());
    for (std::size_t k = 0; k < model.classes.size(); ++k)
        values[k] = x.dot(row, model.weights[k]) + model.intercepts[k];
    return values;
}

std::vector<std::string> predict(const LinearModel& model, const FeatureMatrix& x) {
    if (x.cols() != model.dim())
        throw ShapeError("predict: matrix width " + std::to_string(x.cols()) +
                         " does not match model dimension " + std::to_string(model.dim()));
    std::vector<std::string> out;
    out.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const std::vector<double> values = decision_values(model, x, i);
        std::size_t best = 0;
        for (std::size_t k = 1; k < values.size(); ++k)
            if (values[k] > values[best]) best = k;
        out.push_back(model.classes[best]);
    }
    return out;
}

void LinearModel::save(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write model file: " + file.string());
    out.precision(17);
    out << "stilus-linear-model 1\n";
    out << "C " << c << '\n';
    out << "classes " << classes.size() << '\n';
    for (const std::string& cls : classes) out << cls << '\n';
    out << "dim " << dim() << '\n';
    for (std::size_t k = 0; k < classes.size(); ++k) {
        out << intercepts[k];
        for (double v : weights[k]) out << ' ' << v;
        out << '\n';
    }
}

LinearModel LinearModel::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot read model file: " + file.string());
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "stilus-linear-model" || version != 1)
        throw Error("unrecognized model format in " + file.string());

    LinearModel model;
    std::string key;
    std::size_t n_classes = 0, dim = 0;
    in >> key >> model.c >> key >> n_classes;
    model.classes.resize(n_classes);
    for (std::string& cls : model.classes) in >> cls;
    in >> key >> dim;
    model.weights.assign(n_classes, std::vector<double>(dim));
    model.intercepts.assign(n_classes, 0.0);
    for (std::size_t k = 0; k < n_classes; ++k) {
        in >> model.intercepts[k];
        for (std::size_t j = 0; j < dim; ++j) in >> model.weights[k][j];
    }
    if (!in) throw Error("truncated model file: " + file.string());
    return model;
}

}  // namespace stilus
