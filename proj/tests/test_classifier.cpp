#include <doctest.h>

#include "stilus/classifier.hpp"
#include "stilus/errors.hpp"
#include "stilus/rng.hpp"

using namespace stilus;

namespace {

FeatureMatrix dense(const std::vector<std::vector<double>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    FeatureMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<FeatureMatrix::Entry> entries;
        for (std::size_t j = 0; j < cols; ++j)
            if (rows[i][j] != 0.0) entries.emplace_back(j, rows[i][j]);
        m.set_row(i, std::move(entries));
    }
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("classifier");

TEST_CASE("separable singleton classes are classified correctly") {
    const FeatureMatrix x = dense({{1.0, 0.0}, {0.0, 1.0}});
    const std::vector<std::string> y = {"left", "right"};
    const LinearModel model = train(x, y, 1.0);
    CHECK(predict(model, x) == y);
}

TEST_CASE("orthogonal indicator features recover each class") {
    const FeatureMatrix x = dense({{1, 0, 0},
                                   {1, 0, 0},
                                   {0, 1, 0},
                                   {0, 1, 0},
                                   {0, 0, 1},
                                   {0, 0, 1}});
    const std::vector<std::string> y = {"a", "a", "b", "b", "c", "c"};
    const LinearModel model = train(x, y, 10.0);
    CHECK(predict(model, x) == y);

    // the indicator weight dominates each class separator
    for (std::size_t k = 0; k < model.classes.size(); ++k) {
        for (std::size_t j = 0; j < 3; ++j) {
            if (j == k) continue;
            CHECK(model.weights[k][k] > model.weights[k][j]);
        }
    }
}

TEST_CASE("training is deterministic") {
    SplitMix64 rng(8080);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> row(6);
        for (double& v : row) v = rng.unit() - 0.5;
        const bool a = rng.below(2) == 0;
        row[0] += a ? 1.0 : -1.0;
        rows.push_back(std::move(row));
        labels.push_back(a ? "a" : "b");
    }
    const FeatureMatrix x = dense(rows);
    const LinearModel m1 = train(x, labels, 0.5);
    const LinearModel m2 = train(x, labels, 0.5);
    CHECK(m1.weights == m2.weights);
    CHECK(m1.intercepts == m2.intercepts);
    CHECK(predict(m1, x) == predict(m2, x));
}

TEST_CASE("prediction breaks ties toward the lowest class index") {
    const FeatureMatrix x = dense({{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
    const std::vector<std::string> y = {"a", "b", "c"};
    LinearModel model = train(x, y, 1.0);

    // zero row with zeroed intercepts scores 0 everywhere
    for (double& b : model.intercepts) b = 0.0;
    FeatureMatrix zero(1, 2);
    zero.set_row(0, {});
    CHECK(predict(model, zero) == std::vector<std::string>{"a"});
}

TEST_CASE("predictions are invariant under a consistent column permutation") {
    SplitMix64 rng(1234);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (int i = 0; i < 30; ++i) {
        std::vector<double> row(5);
        for (double& v : row) v = rng.unit();
        labels.push_back(i % 3 == 0 ? "a" : (i % 3 == 1 ? "b" : "c"));
        row[static_cast<std::size_t>(i % 3)] += 2.0;
        rows.push_back(std::move(row));
    }
    const FeatureMatrix x = dense(rows);
    const LinearModel model = train(x, labels, 1.0);

    // permute the columns of both the data and the model
    const std::vector<std::size_t> perm = {3, 0, 4, 1, 2};
    std::vector<std::vector<double>> permuted_rows = rows;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j)
            permuted_rows[i][j] = rows[i][perm[j]];
    LinearModel permuted_model = model;
    for (std::size_t k = 0; k < model.weights.size(); ++k)
        for (std::size_t j = 0; j < perm.size(); ++j)
            permuted_model.weights[k][j] = model.weights[k][perm[j]];

    CHECK(predict(permuted_model, dense(permuted_rows)) == predict(model, x));
}

TEST_CASE("scaling every decision value preserves the argmax") {
    SplitMix64 rng(4321);
    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    for (int i = 0; i < 24; ++i) {
        std::vector<double> row(4);
        for (double& v : row) v = rng.unit();
        row[static_cast<std::size_t>(i % 2)] += 1.5;
        rows.push_back(std::move(row));
        labels.push_back(i % 2 == 0 ? "a" : "b");
    }
    const FeatureMatrix x = dense(rows);
    const LinearModel model = train(x, labels, 1.0);

    LinearModel scaled = model;
    for (auto& w : scaled.weights)
        for (double& v : w) v *= 7.5;
    for (double& b : scaled.intercepts) b *= 7.5;
    CHECK(predict(scaled, x) == predict(model, x));
}

TEST_CASE("separable desk-scale sets reach training accuracy 1 for C >= 1") {
    SplitMix64 rng(55);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 10 + rng.below(41);  // up to ~50 rows
        std::vector<std::vector<double>> rows;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t cls = rng.below(3);
            std::vector<double> row(4, 0.0);
            row[cls] = 1.0 + rng.unit();          // separable by construction
            row[3] = rng.unit() * 0.1;
            rows.push_back(std::move(row));
            labels.push_back("class" + std::to_string(cls));
        }
        labels[0] = "class0";
        labels[1] = "class1";
        labels[2] = "class2";
        rows[0][0] = 1.5; rows[0][1] = 0; rows[0][2] = 0;
        rows[1][1] = 1.5; rows[1][0] = 0; rows[1][2] = 0;
        rows[2][2] = 1.5; rows[2][0] = 0; rows[2][1] = 0;
        const FeatureMatrix x = dense(rows);
        for (double c : {1.0, 10.0}) {
            const LinearModel model = train(x, labels, c);
            REQUIRE(predict(model, x) == labels);
        }
    }
}

TEST_CASE("degenerate inputs raise typed errors") {
    const FeatureMatrix x = dense({{1.0}, {2.0}});
    CHECK_THROWS_AS(train(x, {"same", "same"}, 1.0), DegenerateLabelsError);
    CHECK_THROWS_AS(train(x, {"a"}, 1.0), ShapeError);

    const LinearModel model = train(x, {"a", "b"}, 1.0);
    const FeatureMatrix wide = dense({{1.0, 2.0}});
    CHECK_THROWS_AS(predict(model, wide), ShapeError);
}

TEST_CASE("models round-trip through the text format") {
    const FeatureMatrix x = dense({{1.0, 0.2}, {0.1, 1.0}, {0.9, 0.0}});
    const LinearModel model = train(x, {"a", "b", "a"}, 2.0);

    namespace fs = std::filesystem;
    const fs::path file = fs::temp_directory_path() / "stilus_model_test.txt";
    model.save(file);
    const LinearModel back = LinearModel::load(file);
    CHECK(back.classes == model.classes);
    CHECK(back.c == model.c);
    CHECK(back.weights == model.weights);
    CHECK(back.intercepts == model.intercepts);
    fs::remove(file);
}

TEST_SUITE_END();
