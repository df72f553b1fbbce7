#pragma once

#include <cstdint>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stilus/prosody.hpp"

namespace stilus {

// Topic-masking views of a text. The four DV methods replace every word
// outside a function-word list with asterisks (wholly or in part); FAKE
// replaces every word with a memoized random string of quantity symbols;
// SQ is the scansion of the text.

enum class ViewMethod : std::uint8_t { DVMA, DVSA, DVEX, DVL2, FAKE, SQ };

const char* view_method_name(ViewMethod m);
ViewMethod view_method_from_name(std::string_view name);

// The 80 normalized Latin function words used both as base features and as
// the pass-through list F of the distortion methods.
class FunctionWordList {
public:
    static const FunctionWordList& latin();

    explicit FunctionWordList(std::vector<std::string> words);

    bool contains(std::string_view token) const;
    const std::vector<std::string>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

private:
    std::vector<std::string> words_;
    std::unordered_set<std::string> set_;
};

struct EncodedView {
    ViewMethod method;
    std::string text;  // tokens separated by single spaces
    // For FAKE and SQ: one continuous symbol string per sentence, over the
    // ASCII alphabet {'-','U','X'}. Character n-grams for these methods are
    // drawn from the segments, never across them.
    std::vector<std::string> segments;
};

// word -> fixed random SQ-symbol string of length max(1, round(len/3)).
// The value depends only on (seed, word), so concurrent lookups and lookup
// order cannot change an encoding.
class FakeDictionary {
public:
    explicit FakeDictionary(std::uint64_t seed) : seed_(seed) {}

    std::string lookup(std::string_view word) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<std::string, std::string> memo_;
};

// Masks every token outside F according to the method; function words and
// periods pass through. Only the four DV methods are valid here.
EncodedView distort(std::string_view text, ViewMethod method, const FunctionWordList& f);

// Replaces every word with its dictionary string; periods become "X" and
// close a sentence segment.
EncodedView fake_encode(std::string_view text, const FakeDictionary& dict);

// Scansion of the fragment's sentences as an encoded view.
EncodedView sq_encode(const std::vector<std::string>& sentences,
                      const MacronLexicon& lexicon);

// The four distorted views, in DVMA, DVSA, DVEX, DVL2 order.
std::vector<EncodedView> all_views(std::string_view text, const FunctionWordList& f);

}  // namespace stilus
