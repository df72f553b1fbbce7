#include "stilus/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "stilus/errors.hpp"

namespace stilus {

namespace {

constexpr std::size_t kNoColumn = static_cast<std::size_t>(-1);

void l2_normalize(std::vector<FeatureMatrix::Entry>& entries) {
    double sq = 0.0;
    for (const auto& [col, v] : entries) sq += v * v;
    if (sq <= 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (auto& [col, v] : entries) v *= inv;
}

void l2_normalize(std::vector<double>& block, std::size_t from, std::size_t to) {
    double sq = 0.0;
    for (std::size_t i = from; i < to; ++i) sq += block[i] * block[i];
    if (sq <= 0.0) return;
    const double inv = 1.0 / std::sqrt(sq);
    for (std::size_t i = from; i < to; ++i) block[i] *= inv;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

}  // namespace

// --- FeatureMatrix -----------------------------------------------------------

void FeatureMatrix::set_row(std::size_t i, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end());
    rows_[i] = std::move(entries);
}

double FeatureMatrix::dot(std::size_t i, const std::vector<double>& dense) const {
    double sum = 0.0;
    for (const auto& [col, v] : rows_[i]) sum += v * dense[col];
    return sum;
}

FeatureMatrix FeatureMatrix::concat(const FeatureMatrix& other) const {
    if (rows() != other.rows())
        throw ShapeError("cannot concatenate " + std::to_string(rows()) + " rows with " +
                         std::to_string(other.rows()) + " rows");
    FeatureMatrix out(rows(), cols_ + other.cols_);
    for (std::size_t i = 0; i < rows(); ++i) {
        std::vector<Entry> row = rows_[i];
        row.reserve(row.size() + other.rows_[i].size());
        for (const auto& [col, v] : other.rows_[i]) row.emplace_back(cols_ + col, v);
        out.rows_[i] = std::move(row);
    }
    return out;
}

FeatureMatrix FeatureMatrix::hstack(const std::vector<FeatureMatrix>& blocks) {
    if (blocks.empty()) return {};
    FeatureMatrix out = blocks.front();
    for (std::size_t b = 1; b < blocks.size(); ++b) out = out.concat(blocks[b]);
    return out;
}

void FeatureMatrix::save_triplets(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write matrix file: " + file.string());
    std::size_t nnz = 0;
    for (const auto& row : rows_) nnz += row.size();
    out << rows() << ' ' << cols_ << ' ' << nnz << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < rows(); ++i)
        for (const auto& [col, v] : rows_[i]) out << i << ' ' << col << ' ' << v << '\n';
}

FeatureMatrix FeatureMatrix::load_triplets(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot read matrix file: " + file.string());
    std::size_t rows, cols, nnz;
    if (!(in >> rows >> cols >> nnz)) throw Error("bad matrix header: " + file.string());
    FeatureMatrix m(rows, cols);
    std::vector<std::vector<Entry>> tmp(rows);
    for (std::size_t k = 0; k < nnz; ++k) {
        std::size_t i, j;
        double v;
        if (!(in >> i >> j >> v)) throw Error("bad matrix entry: " + file.string());
        if (i >= rows || j >= cols) throw ShapeError("matrix entry out of bounds");
        tmp[i].emplace_back(j, v);
    }
    for (std::size_t i = 0; i < rows; ++i) m.set_row(i, std::move(tmp[i]));
    return m;
}

// --- base features -----------------------------------------------------------

BaseFeatureVector base_features(const Fragment& fragment, const FunctionWordList& f) {
    BaseFeatureVector bf;
    bf.values.assign(BaseFeatureVector::kDim, 0.0);

    std::size_t total_tokens = 0;
    std::size_t total_words = 0;
    std::unordered_map<std::string, std::size_t> fw_index;
    for (std::size_t i = 0; i < f.words().size(); ++i) fw_index[f.words()[i]] = i;

    std::vector<double> word_len(BaseFeatureVector::kWordLengths, 0.0);
    std::vector<double> sent_len(BaseFeatureVector::kSentenceLengths, 0.0);

    for (const std::string& sentence : fragment.sentences) {
        std::size_t words_in_sentence = 0;
        for (const std::string& token : tokenize(sentence)) {
            ++total_tokens;
            if (token == ".") continue;
            ++total_words;
            ++words_in_sentence;
            const auto it = fw_index.find(token);
            if (it != fw_index.end()) bf.values[it->second] += 1.0;
            const std::size_t len =
                std::min(token.size(), BaseFeatureVector::kWordLengths);
            if (len >= 1) word_len[len - 1] += 1.0;
        }
        if (words_in_sentence >= 1) {
            const std::size_t len =
                std::min(words_in_sentence, BaseFeatureVector::kSentenceLengths);
            sent_len[len - 1] += 1.0;
        }
    }

    if (total_tokens > 0)
        for (std::size_t i = 0; i < BaseFeatureVector::kFunctionWords; ++i)
            bf.values[i] /= static_cast<double>(total_tokens);
    if (total_words > 0)
        for (std::size_t i = 0; i < word_len.size(); ++i)
            bf.values[BaseFeatureVector::kFunctionWords + i] =
                word_len[i] / static_cast<double>(total_words);
    const std::size_t n_sentences = fragment.sentences.size();
    if (n_sentences > 0)
        for (std::size_t i = 0; i < sent_len.size(); ++i)
            bf.values[BaseFeatureVector::kFunctionWords + BaseFeatureVector::kWordLengths +
                      i] = sent_len[i] / static_cast<double>(n_sentences);

    l2_normalize(bf.values, 0, BaseFeatureVector::kFunctionWords);
    l2_normalize(bf.values, BaseFeatureVector::kFunctionWords,
                 BaseFeatureVector::kFunctionWords + BaseFeatureVector::kWordLengths);
    l2_normalize(bf.values,
                 BaseFeatureVector::kFunctionWords + BaseFeatureVector::kWordLengths,
                 BaseFeatureVector::kDim);
    return bf;
}

FeatureMatrix base_feature_matrix(const std::vector<const Fragment*>& fragments,
                                  const FunctionWordList& f) {
    FeatureMatrix m(fragments.size(), BaseFeatureVector::kDim);
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        const BaseFeatureVector bf = base_features(*fragments[i], f);
        std::vector<FeatureMatrix::Entry> row;
        for (std::size_t j = 0; j < bf.values.size(); ++j)
            if (bf.values[j] != 0.0) row.emplace_back(j, bf.values[j]);
        m.set_row(i, std::move(row));
    }
    return m;
}

// --- n-grams -----------------------------------------------------------------

std::map<std::string, std::size_t> char_ngrams(const EncodedView& view,
                                               const NGramSpec& spec) {
    std::map<std::string, std::size_t> counts;
    const auto slide = [&](std::string_view s) {
        for (int n = spec.n_min; n <= spec.n_max; ++n) {
            if (s.size() < static_cast<std::size_t>(n)) continue;
            for (std::size_t i = 0; i + n <= s.size(); ++i)
                ++counts[std::string(s.substr(i, static_cast<std::size_t>(n)))];
        }
    };
    if (view.method == ViewMethod::SQ || view.method == ViewMethod::FAKE) {
        for (const std::string& seg : view.segments) slide(seg);
    } else {
        slide(view.text);
    }
    return counts;
}

// --- feature space -----------------------------------------------------------

FeatureSpace fit_space(const std::vector<EncodedView>& views, const NGramSpec& spec,
                       const std::vector<std::string>& labels, std::optional<double> r) {
    FeatureSpace space;
    space.spec_ = spec;
    space.r_ = r;

    std::vector<std::map<std::string, std::size_t>> per_view;
    per_view.reserve(views.size());
    std::map<std::string, std::size_t> total;
    std::map<std::string, std::size_t> df;
    for (const EncodedView& v : views) {
        per_view.push_back(char_ngrams(v, spec));
        for (const auto& [gram, count] : per_view.back()) {
            total[gram] += count;
            df[gram] += 1;
        }
    }

    for (const auto& [gram, count] : total)
        if (count >= static_cast<std::size_t>(spec.min_count))
            space.vocabulary_.push_back(gram);
    if (space.vocabulary_.empty())
        throw EmptyVocabularyError("no n-gram meets the occurrence threshold");

    const double n_docs = static_cast<double>(views.size());
    space.idf_.reserve(space.vocabulary_.size());
    for (const std::string& gram : space.vocabulary_)
        space.idf_.push_back(
            std::log((1.0 + n_docs) / (1.0 + static_cast<double>(df[gram]))) + 1.0);

    // identity mask by default
    space.mask_.resize(space.vocabulary_.size());
    std::iota(space.mask_.begin(), space.mask_.end(), 0);
    space.col_map_ = space.mask_;

    if (r.has_value()) {
        if (labels.size() != views.size())
            throw ShapeError("chi-squared selection needs one label per view");
        // Build the weighted matrix once via the identity transform, then
        // keep the ceil(r * p) top-scoring columns.
        const FeatureMatrix weighted = transform(views, space);
        space.chi2_ = chi2_scores(weighted, labels);

        std::vector<std::size_t> order(space.vocabulary_.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (space.chi2_[a] != space.chi2_[b]) return space.chi2_[a] > space.chi2_[b];
            return a < b;
        });
        const std::size_t p = space.vocabulary_.size();
        const std::size_t keep = std::min<std::size_t>(
            p, static_cast<std::size_t>(std::ceil(*r * static_cast<double>(p))));
        space.mask_.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep));
        std::sort(space.mask_.begin(), space.mask_.end());
        space.col_map_.assign(p, kNoColumn);
        for (std::size_t out = 0; out < space.mask_.size(); ++out)
            space.col_map_[space.mask_[out]] = out;
    }
    return space;
}

FeatureMatrix transform(const std::vector<EncodedView>& views, const FeatureSpace& space) {
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(space.vocabulary_.size());
    for (std::size_t i = 0; i < space.vocabulary_.size(); ++i)
        index[space.vocabulary_[i]] = i;

    FeatureMatrix out(views.size(), space.mask_.size());
    for (std::size_t i = 0; i < views.size(); ++i) {
        std::vector<FeatureMatrix::Entry> full;
        for (const auto& [gram, count] : char_ngrams(views[i], space.spec_)) {
            const auto it = index.find(gram);
            if (it == index.end()) continue;  // out of vocabulary
            full.emplace_back(it->second,
                              static_cast<double>(count) * space.idf_[it->second]);
        }
        l2_normalize(full);
        std::vector<FeatureMatrix::Entry> masked;
        masked.reserve(full.size());
        for (const auto& [col, v] : full)
            if (space.col_map_[col] != kNoColumn)
                masked.emplace_back(space.col_map_[col], v);
        out.set_row(i, std::move(masked));
    }
    return out;
}

FeatureMatrix assemble(const std::vector<FeatureMatrix>& blocks) {
    return FeatureMatrix::hstack(blocks);
}

std::vector<double> chi2_scores(const FeatureMatrix& x,
                                const std::vector<std::string>& labels) {
    if (labels.size() != x.rows())
        throw ShapeError("chi2_scores: label count does not match row count");

    std::vector<std::string> classes(labels);
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    std::unordered_map<std::string, std::size_t> class_index;
    for (std::size_t c = 0; c < classes.size(); ++c) class_index[classes[c]] = c;

    std::vector<double> prior(classes.size(), 0.0);
    for (const std::string& l : labels) prior[class_index[l]] += 1.0;
    for (double& p : prior) p /= static_cast<double>(labels.size());

    // observed per-class column sums
    std::vector<std::vector<double>> observed(classes.size(),
                                              std::vector<double>(x.cols(), 0.0));
    std::vector<double> feature_total(x.cols(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const std::size_t c = class_index[labels[i]];
        for (const auto& [col, v] : x.row(i)) {
            observed[c][col] += v;
            feature_total[col] += v;
        }
    }

    std::vector<double> scores(x.cols(), 0.0);
    for (std::size_t col = 0; col < x.cols(); ++col) {
        if (feature_total[col] <= 0.0) continue;
        double s = 0.0;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const double expected = prior[c] * feature_total[col];
            const double diff = observed[c][col] - expected;
            s += diff * diff / expected;
        }
        scores[col] = s;
    }
    return scores;
}

void FeatureSpace::save_vocabulary(const std::filesystem::path& file) const {
    std::ofstream out(file);
    if (!out) throw Error("cannot write vocabulary file: " + file.string());
    out << "# column\tngram\tidf\tchi2\tselected\n";
    out.precision(17);
    for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
        out << i << '\t' << vocabulary_[i] << '\t' << idf_[i] << '\t'
            << (chi2_.empty() ? 0.0 : chi2_[i]) << '\t'
            << (col_map_[i] != kNoColumn ? 1 : 0) << '\n';
    }
}

}  // namespace stilus
