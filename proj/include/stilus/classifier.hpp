#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stilus/features.hpp"

namespace stilus {

// One-vs-rest linear large-margin classifier: per class, an L2-regularized
// squared-hinge separator trained by dual coordinate descent. Deterministic
// given the data order.
struct LinearModel {
    std::vector<std::string> classes;        // fixed label order (sorted)
    std::vector<std::vector<double>> weights;  // per class, dim = feature count
    std::vector<double> intercepts;          // per class
    double c = 1.0;

    std::size_t dim() const { return weights.empty() ? 0 : weights.front().size(); }

    void save(const std::filesystem::path& file) const;
    static LinearModel load(const std::filesystem::path& file);
};

struct TrainOptions {
    double tolerance = 1e-4;
    int max_iterations = 10000;
    double bias_scale = 1.0;  // intercept via feature augmentation
};

// Throws DegenerateLabelsError with fewer than two classes and ShapeError
// when rows and labels disagree.
LinearModel train(const FeatureMatrix& x, const std::vector<std::string>& labels,
                  double c, const TrainOptions& options = {});

// Per-class decision values for one row.
std::vector<double> decision_values(const LinearModel& model, const FeatureMatrix& x,
                                    std::size_t row);

// Argmax of the decision values; ties break toward the lowest class index.
// Throws ShapeError when the matrix width differs from the model.
std::vector<std::string> predict(const LinearModel& model, const FeatureMatrix& x);

}  // namespace stilus
