#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stilus/corpus.hpp"
#include "stilus/distortion.hpp"

namespace stilus {

// Sparse row-major matrix; each row holds (column, value) pairs sorted by
// column. Explicit zeros are never stored.
class FeatureMatrix {
public:
    using Entry = std::pair<std::size_t, double>;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
    void set_row(std::size_t i, std::vector<Entry> entries);

    double dot(std::size_t i, const std::vector<double>& dense) const;

    // Horizontal concatenation, this matrix first. Throws ShapeError on a
    // row-count mismatch.
    FeatureMatrix concat(const FeatureMatrix& other) const;

    static FeatureMatrix hstack(const std::vector<FeatureMatrix>& blocks);

    // Plain text triplet serialization: a `rows cols nnz` header line, then
    // one `row col value` line per stored entry.
    void save_triplets(const std::filesystem::path& file) const;
    static FeatureMatrix load_triplets(const std::filesystem::path& file);

private:
    std::size_t cols_ = 0;
    std::vector<std::vector<Entry>> rows_;
};

// 80 function-word frequencies ++ 25 word-length frequencies ++ 100
// sentence-length frequencies, each block L2-normalized on its own.
struct BaseFeatureVector {
    static constexpr std::size_t kFunctionWords = 80;
    static constexpr std::size_t kWordLengths = 25;
    static constexpr std::size_t kSentenceLengths = 100;
    static constexpr std::size_t kDim = kFunctionWords + kWordLengths + kSentenceLengths;

    std::vector<double> values;  // size kDim
};

BaseFeatureVector base_features(const Fragment& fragment,
                                const FunctionWordList& f = FunctionWordList::latin());

// Base-feature rows for a list of fragments.
FeatureMatrix base_feature_matrix(const std::vector<const Fragment*>& fragments,
                                  const FunctionWordList& f = FunctionWordList::latin());

struct NGramSpec {
    int n_min = 3;
    int n_max = 3;
    int min_count = 1;  // minimum total occurrences in the training set

    static NGramSpec sq() { return {3, 7, 1}; }
    static NGramSpec dv() { return {3, 3, 5}; }
};

// Multiset of character n-grams of one view. DV views slide windows over
// the full text (spaces and '*' included); FAKE and SQ views slide within
// each per-sentence symbol segment.
std::map<std::string, std::size_t> char_ngrams(const EncodedView& view,
                                               const NGramSpec& spec);

// Frozen vocabulary, IDF weights, and optional chi-squared selection mask.
// Fitted on training fragments only; transform never adds columns.
class FeatureSpace {
public:
    const std::vector<std::string>& vocabulary() const { return vocabulary_; }
    const std::vector<double>& idf() const { return idf_; }

    // Pre-selection feature count p and the retained columns (indices into
    // the vocabulary, ascending). Without selection the mask is identity.
    std::size_t pre_selection_count() const { return vocabulary_.size(); }
    const std::vector<std::size_t>& selection_mask() const { return mask_; }
    std::optional<double> selection_fraction() const { return r_; }

    std::size_t output_dim() const { return mask_.size(); }

    // Chi-squared score per vocabulary column (empty when unselected).
    const std::vector<double>& chi2_scores() const { return chi2_; }

    friend FeatureSpace fit_space(const std::vector<EncodedView>& views,
                                  const NGramSpec& spec,
                                  const std::vector<std::string>& labels,
                                  std::optional<double> r);
    friend FeatureMatrix transform(const std::vector<EncodedView>& views,
                                   const FeatureSpace& space);

    void save_vocabulary(const std::filesystem::path& file) const;

private:
    NGramSpec spec_;
    std::vector<std::string> vocabulary_;  // sorted
    std::vector<double> idf_;
    std::vector<double> chi2_;
    std::vector<std::size_t> mask_;     // retained columns, ascending
    std::vector<std::size_t> col_map_;  // vocabulary column -> output column (or npos)
    std::optional<double> r_;
};

// Builds the vocabulary (n-grams with total training occurrences >=
// spec.min_count, sorted), smoothed IDF weights, L2-normalized TFIDF rows,
// and, when `r` is given, retains the ceil(r * p) columns with the highest
// chi-squared scores against `labels`. Throws EmptyVocabularyError when no
// n-gram survives the threshold.
FeatureSpace fit_space(const std::vector<EncodedView>& views, const NGramSpec& spec,
                       const std::vector<std::string>& labels = {},
                       std::optional<double> r = std::nullopt);

// TFIDF rows under a fitted space; out-of-vocabulary n-grams are ignored
// and the selection mask is applied after row normalization.
FeatureMatrix transform(const std::vector<EncodedView>& views, const FeatureSpace& space);

// Horizontal concatenation of feature blocks in the given order.
FeatureMatrix assemble(const std::vector<FeatureMatrix>& blocks);

// Chi-squared scores of an observed nonnegative matrix against labels:
// per feature, sum over classes of (observed - expected)^2 / expected,
// where observed is the per-class column sum and expected follows the
// class priors.
std::vector<double> chi2_scores(const FeatureMatrix& x,
                                const std::vector<std::string>& labels);

}  // namespace stilus
