#include <doctest.h>

#include <cmath>
#include <map>

#include "stilus/errors.hpp"
#include "stilus/features.hpp"
#include "stilus/rng.hpp"

using namespace stilus;

namespace {

Fragment fragment_of(const std::vector<std::string>& sentences,
                     const std::string& author = "a") {
    Fragment f;
    f.author = author;
    f.sentences = sentences;
    f.document = author + "_doc";
    return f;
}

EncodedView sq_view_of(const std::vector<std::string>& segments) {
    EncodedView v;
    v.method = ViewMethod::SQ;
    v.segments = segments;
    return v;
}

EncodedView dv_view_of(const std::string& text) {
    return EncodedView{ViewMethod::DVMA, text, {}};
}

double dense_at(const FeatureMatrix& m, std::size_t i, std::size_t j) {
    for (const auto& [col, v] : m.row(i))
        if (col == j) return v;
    return 0.0;
}

// Brute-force chi-squared oracle: one dense contingency computation per
// feature, independent of the sparse implementation.
std::vector<double> chi2_oracle(const std::vector<std::vector<double>>& x,
                                const std::vector<std::string>& labels) {
    std::vector<std::string> classes(labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());

    const std::size_t features = x.empty() ? 0 : x.front().size();
    std::vector<double> scores(features, 0.0);
    for (std::size_t f = 0; f < features; ++f) {
        double total = 0.0;
        std::map<std::string, double> observed;
        std::map<std::string, double> count;
        for (std::size_t i = 0; i < x.size(); ++i) {
            observed[labels[i]] += x[i][f];
            count[labels[i]] += 1.0;
            total += x[i][f];
        }
        if (total <= 0.0) continue;
        double s = 0.0;
        for (const std::string& c : classes) {
            const double expected = count[c] / static_cast<double>(x.size()) * total;
            const double diff = observed[c] - expected;
            s += diff * diff / expected;
        }
        scores[f] = s;
    }
    return scores;
}

}  // namespace

TEST_SUITE_BEGIN("features");

TEST_CASE("base features are 205 wide with unit-norm blocks") {
    const Fragment f = fragment_of(
        {"et tu nunc abc defgh .", "et et longissimumuerbum breuis x ."});
    const BaseFeatureVector bf = base_features(f);
    REQUIRE(bf.values.size() == 205);

    SUBCASE("function word block counts exact tokens") {
        // "et" is index 18 of the list; it occurs 3 times among 12 tokens
        double expected_raw = 3.0 / 12.0;
        double norm = 0.0;
        for (std::size_t i = 0; i < 80; ++i) norm += bf.values[i] * bf.values[i];
        CHECK(std::sqrt(norm) == doctest::Approx(1.0));
        // "et" and "nunc" are the only function words present
        const double et = bf.values[18];
        const double nunc = bf.values[37];
        CHECK(et / nunc == doctest::Approx(3.0));
        CHECK(et == doctest::Approx(expected_raw / std::hypot(3.0 / 12.0, 1.0 / 12.0)));
    }
    SUBCASE("word length block clamps at 25") {
        const Fragment g = fragment_of({"a bb ccc superlongword"
                                        "thatexceedstwentyfivecharacters ."});
        const BaseFeatureVector bg = base_features(g);
        CHECK(bg.values[80 + 24] > 0.0);  // clamped into the 25 bin
    }
    SUBCASE("sentence length block clamps at 100") {
        std::string long_sentence;
        for (int i = 0; i < 130; ++i) long_sentence += "w" + std::to_string(i) + " ";
        const BaseFeatureVector bg = base_features(fragment_of({long_sentence + "."}));
        CHECK(bg.values[80 + 25 + 99] == doctest::Approx(1.0));
    }
    SUBCASE("no function words leaves the first block zero") {
        const BaseFeatureVector bg =
            base_features(fragment_of({"arma uirumque cano troiae primus oris ."}));
        for (std::size_t i = 0; i < 80; ++i) REQUIRE(bg.values[i] == 0.0);
    }
}

TEST_CASE("char_ngrams slides per method") {
    SUBCASE("SQ windows stay inside segments and include the anceps") {
        const auto grams = char_ngrams(sq_view_of({"-U-X"}), {3, 3, 1});
        REQUIRE(grams.size() == 2);
        CHECK(grams.at("-U-") == 1);
        CHECK(grams.at("U-X") == 1);
    }
    SUBCASE("a range of n produces every window") {
        const auto grams = char_ngrams(sq_view_of({"-UU-"}), {3, 4, 1});
        REQUIRE(grams.size() == 3);
        CHECK(grams.count("-UU"));
        CHECK(grams.count("UU-"));
        CHECK(grams.count("-UU-"));
    }
    SUBCASE("segments do not bleed into each other") {
        const auto grams = char_ngrams(sq_view_of({"-UX", "U-X"}), {3, 3, 1});
        REQUIRE(grams.size() == 2);
        CHECK(grams.count("-UX"));
        CHECK(grams.count("U-X"));
        CHECK_FALSE(grams.count("UXU"));
    }
    SUBCASE("DV windows include spaces and periods") {
        const auto grams = char_ngrams(dv_view_of("p*a ."), {3, 3, 1});
        REQUIRE(grams.size() == 3);
        CHECK(grams.count("p*a"));
        CHECK(grams.count("*a "));
        CHECK(grams.count("a ."));
    }
}

TEST_CASE("fit_space freezes vocabulary, idf and selection on training data") {
    const std::vector<EncodedView> train = {
        sq_view_of({"---UUU-X"}), sq_view_of({"-U-U-UX"}), sq_view_of({"UUUU-X"})};

    SUBCASE("a single fragment gives uniform idf and unit rows") {
        const std::vector<EncodedView> one = {sq_view_of({"-U-UX"})};
        const FeatureSpace space = fit_space(one, NGramSpec::sq());
        for (double idf : space.idf()) CHECK(idf == doctest::Approx(1.0 + std::log(1.0)));
        const FeatureMatrix m = transform(one, space);
        double norm = 0.0;
        for (const auto& [col, v] : m.row(0)) norm += v * v;
        CHECK(std::sqrt(norm) == doctest::Approx(1.0));
    }
    SUBCASE("min_count filters rare n-grams") {
        const std::vector<EncodedView> views = {dv_view_of("aaaa bbbb aaaa aaaa aaaa")};
        const FeatureSpace space = fit_space(views, NGramSpec::dv());
        for (const std::string& gram : space.vocabulary())
            CHECK(gram.find('b') == std::string::npos);
        CHECK_THROWS_AS(fit_space({dv_view_of("ab")}, NGramSpec::dv()),
                        EmptyVocabularyError);
    }
    SUBCASE("r = 1.0 keeps every column") {
        const FeatureSpace space =
            fit_space(train, NGramSpec::sq(), {"a", "a", "b"}, 1.0);
        CHECK(space.selection_mask().size() == space.pre_selection_count());
        CHECK(space.output_dim() == space.vocabulary().size());
    }
    SUBCASE("masks are nested as r grows") {
        std::vector<std::size_t> previous;
        for (double r : {0.1, 0.2, 0.3, 0.4, 0.5, 1.0}) {
            const FeatureSpace space =
                fit_space(train, NGramSpec::sq(), {"a", "a", "b"}, r);
            const std::vector<std::size_t>& mask = space.selection_mask();
            CHECK(mask.size() ==
                  static_cast<std::size_t>(
                      std::ceil(r * static_cast<double>(space.pre_selection_count()))));
            for (std::size_t col : previous)
                REQUIRE(std::find(mask.begin(), mask.end(), col) != mask.end());
            previous = mask;
        }
    }
    SUBCASE("a class-exclusive feature ranks first") {
        // "---" appears only in the first view (class a)
        const FeatureSpace space =
            fit_space(train, NGramSpec::sq(), {"a", "b", "b"}, 0.1);
        REQUIRE(space.selection_mask().size() >= 1);
        bool found = false;
        for (std::size_t col : space.selection_mask())
            found = found || space.vocabulary()[col] == "---";
        CHECK(found);
    }
}

TEST_CASE("transform matches fit and ignores unseen n-grams") {
    const std::vector<EncodedView> train = {sq_view_of({"---UUUX"}),
                                            sq_view_of({"UU--UX"})};
    const FeatureSpace space = fit_space(train, NGramSpec::sq());

    SUBCASE("training transform is reproducible") {
        const FeatureMatrix a = transform(train, space);
        const FeatureMatrix b = transform(train, space);
        REQUIRE(a.rows() == b.rows());
        for (std::size_t i = 0; i < a.rows(); ++i) REQUIRE(a.row(i) == b.row(i));
    }
    SUBCASE("out-of-vocabulary views become zero rows") {
        const FeatureMatrix m = transform({sq_view_of({"XXXXXXX"})}, space);
        CHECK(m.row(0).empty());
    }
    SUBCASE("column count equals the mask size") {
        const FeatureSpace selected =
            fit_space(train, NGramSpec::sq(), {"a", "b"}, 0.2);
        const FeatureMatrix m = transform(train, selected);
        CHECK(m.cols() == selected.selection_mask().size());
    }
    SUBCASE("held-out transform does not mutate the space") {
        const std::size_t vocab_before = space.vocabulary().size();
        (void)transform({sq_view_of({"X-X-X-X"})}, space);
        CHECK(space.vocabulary().size() == vocab_before);
    }
}

TEST_CASE("chi-squared scores match the brute-force oracle") {
    SplitMix64 rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t rows = 2 + rng.below(20);
        const std::size_t cols = 1 + rng.below(10);
        const std::size_t n_classes = 2 + rng.below(4);  // up to 5 classes

        std::vector<std::vector<double>> dense(rows, std::vector<double>(cols, 0.0));
        std::vector<std::string> labels;
        FeatureMatrix sparse(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) {
            labels.push_back("class" + std::to_string(rng.below(n_classes)));
            std::vector<FeatureMatrix::Entry> row;
            for (std::size_t j = 0; j < cols; ++j) {
                if (rng.below(3) == 0) continue;  // sparsity
                const double v = static_cast<double>(rng.below(100)) / 25.0;
                if (v == 0.0) continue;
                dense[i][j] = v;
                row.emplace_back(j, v);
            }
            sparse.set_row(i, std::move(row));
        }
        // at least two distinct labels
        labels[0] = "class0";
        labels[1] = "class1";

        const std::vector<double> expected = chi2_oracle(dense, labels);
        const std::vector<double> actual = chi2_scores(sparse, labels);
        REQUIRE(actual.size() == expected.size());
        for (std::size_t j = 0; j < expected.size(); ++j)
            REQUIRE(actual[j] == doctest::Approx(expected[j]).epsilon(1e-9));
    }
}

TEST_CASE("assemble concatenates blocks in order") {
    const Fragment f = fragment_of({"et arma uirumque cano nunc ."});
    const FeatureMatrix bfs = base_feature_matrix({&f});
    CHECK(bfs.cols() == 205);

    const std::vector<EncodedView> views = {sq_view_of({"-U-X"})};
    const FeatureSpace space = fit_space(views, NGramSpec::sq());
    const FeatureMatrix block = transform(views, space);

    const FeatureMatrix combined = assemble({bfs, block});
    CHECK(combined.cols() == 205 + block.cols());
    CHECK(combined.rows() == 1);
    CHECK(dense_at(combined, 0, 205) == dense_at(block, 0, 0));

    SUBCASE("row mismatches are a shape error") {
        FeatureMatrix two(2, 3);
        CHECK_THROWS_AS(assemble({bfs, two}), ShapeError);
    }
}

TEST_CASE("permuting inputs permutes rows identically across blocks") {
    const std::vector<Fragment> fragments = {
        fragment_of({"et arma cano unus duo tres ."}),
        fragment_of({"nunc uirum quattuor quinque sex septem ."}),
        fragment_of({"de bello gallico octo nouem decem ."})};
    const std::vector<EncodedView> views = {sq_view_of({"-U-UX"}),
                                            sq_view_of({"--UUX"}),
                                            sq_view_of({"UU--X"})};
    const FeatureSpace space = fit_space(views, NGramSpec::sq());

    const std::vector<std::size_t> perm = {2, 0, 1};
    std::vector<const Fragment*> base, permuted_base;
    std::vector<EncodedView> permuted_views;
    for (std::size_t i = 0; i < 3; ++i) {
        base.push_back(&fragments[i]);
        permuted_base.push_back(&fragments[perm[i]]);
        permuted_views.push_back(views[perm[i]]);
    }

    const FeatureMatrix bfs = base_feature_matrix(base);
    const FeatureMatrix bfs_perm = base_feature_matrix(permuted_base);
    const FeatureMatrix block = transform(views, space);
    const FeatureMatrix block_perm = transform(permuted_views, space);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(bfs_perm.row(i) == bfs.row(perm[i]));
        CHECK(block_perm.row(i) == block.row(perm[i]));
    }
}

TEST_CASE("triplet serialization round-trips") {
    namespace fs = std::filesystem;
    FeatureMatrix m(2, 4);
    m.set_row(0, {{0, 0.5}, {3, 1.25}});
    m.set_row(1, {{2, -2.0}});
    const fs::path file = fs::temp_directory_path() / "stilus_triplets_test.txt";
    m.save_triplets(file);
    const FeatureMatrix back = FeatureMatrix::load_triplets(file);
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 4);
    CHECK(back.row(0) == m.row(0));
    CHECK(back.row(1) == m.row(1));
    fs::remove(file);
}

TEST_SUITE_END();
