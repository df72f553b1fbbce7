#pragma once

#include <stdexcept>
#include <string>

namespace stilus {

// Error hierarchy shared across the toolkit. Every condition named in a
// module contract has a dedicated type so callers can react selectively.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A word with no vowel nucleus (abbreviation residue etc.); callers skip it.
struct NoNucleusError : Error {
    explicit NoNucleusError(const std::string& word)
        : Error("word has no vowel nucleus: '" + word + "'") {}
};

// A fragment in which no sentence produced any scansion.
struct EmptyEncodingError : Error {
    using Error::Error;
};

// A document that is empty after cleaning, or has no sentences.
struct EmptyDocumentError : Error {
    using Error::Error;
};

// An author with too few fragments to stratify.
struct StratificationError : Error {
    using Error::Error;
};

// Feature fitting found no n-gram meeting the frequency threshold.
struct EmptyVocabularyError : Error {
    using Error::Error;
};

// Row/column count mismatch between matrices or model and data.
struct ShapeError : Error {
    using Error::Error;
};

// Training labels contain fewer than two classes.
struct DegenerateLabelsError : Error {
    using Error::Error;
};

// Evaluation invoked with no predictions.
struct EmptyEvaluationError : Error {
    using Error::Error;
};

}  // namespace stilus
