#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace stilus {

struct Document {
    std::string author;
    std::string title;
    std::string text;  // raw UTF-8
};

// The classification unit: a run of consecutive normalized sentences from
// one document (10 by default; a trailing fragment may hold fewer).
struct Fragment {
    std::string author;
    std::vector<std::string> sentences;  // each ends with " ."
    std::string document;                // source document id
    std::size_t ordinal = 0;             // fragment index within the document

    std::string text() const;  // sentences joined by single spaces
};

// Disjoint train / validation / test fragment index sets, 81/9/10 of the
// total, stratified per author, fully determined by the seed.
struct SplitPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> validation;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;

    // Stable digest of the assignment, for split-identity assertions.
    std::uint64_t hash() const;
};

// Normalizes raw text: strips angle-bracket tags, removes symbols and
// digits, deletes commas, turns ? ! ; : and suspension points into full
// periods, lowercases, folds v->u / j->i and accented vowels, collapses
// whitespace, and isolates '.' as a token. Throws EmptyDocumentError when
// nothing is left.
std::string clean_text(std::string_view raw);

// Splits normalized text on '.', merging any sentence with fewer than
// 5 distinct tokens into the following one (or the previous one when it is
// last). Every returned sentence ends with " .".
std::vector<std::string> split_sentences(std::string_view normalized);

// Non-overlapping windows of `size` sentences; a trailing remainder is kept
// as its own fragment when it has at least size/2 sentences and is merged
// into the previous fragment otherwise.
std::vector<Fragment> make_fragments(const std::vector<std::string>& sentences,
                                     const std::string& author,
                                     const std::string& document,
                                     std::size_t size = 10);

// Stratified 81/9/10 split: authors are processed in sorted order, shuffled
// by the seed, and apportioned with the largest-remainder method.
// Throws StratificationError when an author has fewer than 3 fragments.
SplitPlan stratified_split(const std::vector<Fragment>& fragments, std::uint64_t seed);

// Reads a directory of `Author_Title.txt` files in sorted order. The
// author label is the stem up to the first underscore and must be
// nonempty.
std::vector<Document> load_documents(const std::filesystem::path& dir);

// Cleaning + sentence splitting + fragmentation for one document.
std::vector<Fragment> fragment_document(const Document& doc, std::size_t size = 10);

// load_documents + fragment_document over a whole directory.
std::vector<Fragment> load_corpus(const std::filesystem::path& dir,
                                  std::size_t fragment_size = 10);

}  // namespace stilus
