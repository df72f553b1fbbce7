#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stilus {

// Rule-based Latin scansion. Words are syllabified, each syllable gets a
// quantity (long / short), elision is applied across word boundaries, and
// every sentence yields one segment over the alphabet {'-', 'U', 'X'}:
// '-' long, 'U' short, 'X' anceps (the final syllable of a sentence).
// The ASCII alphabet is used internally; render_quantity_string() produces
// the traditional UTF-8 symbols (− ∪ X) for display.

enum class Quantity : std::uint8_t { Long, Short, Anceps, Unknown };

constexpr char kLongSym = '-';
constexpr char kShortSym = 'U';
constexpr char kAncepsSym = 'X';

struct Syllable {
    std::string text;     // characters of the word belonging to this syllable
    std::string nucleus;  // one vowel or one diphthong
    Quantity quantity = Quantity::Unknown;
};

// Per-word vowel lengths marked "by nature". load() reads a two-column
// file: `word<TAB>macronized-form`, where a long vowel carries a trailing
// colon (`catilina<TAB>catili:na`). Keys are expected in corpus-normalized
// form (lowercase, v->u, j->i); flags index character positions of the key.
class MacronLexicon {
public:
    MacronLexicon() = default;

    static MacronLexicon load(const std::filesystem::path& file);
    static MacronLexicon parse(std::string_view text);

    // Adds `word` with long marks at the flagged character positions.
    void add(const std::string& word, const std::vector<bool>& long_at);
    // Adds an entry given in colon notation, e.g. "abu:te:re".
    void add_marked(std::string_view marked);

    // Character positions of `word` that are long by nature; nullptr when
    // the word has no entry.
    const std::vector<bool>* lookup(const std::string& word) const;

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::vector<bool>> entries_;
};

// Consonant material that follows the last nucleus of a word, contributed
// by the beginning of the next word. End of sentence contributes nothing.
struct NextWordOnset {
    int consonant_units = 0;   // consonant units before the next word's first nucleus
    bool has_double = false;   // one of them is x or z
    bool starts_vocalic = false;  // next word begins with a vowel sound or 'h'
};

struct QuantityString {
    std::string symbols;                         // over {'-', 'U', 'X'}
    std::vector<std::size_t> sentence_boundaries;  // end index (exclusive) per sentence

    std::vector<std::string> segments() const;
};

enum class CursusKind : std::uint8_t { None, Planus, Tardus, Velox };

struct CursusPattern {
    CursusKind kind = CursusKind::None;
    // Stress marks of the sentence-final window that was examined,
    // '-' stressed / '+' unstressed, at most 7 syllables.
    std::string stress_string;
};

// --- per-word operations ---------------------------------------------------

// Splits a normalized word (lowercase a-z) into syllables. Throws
// NoNucleusError when the word has no vowel.
std::vector<Syllable> syllabify(std::string_view word);

// Assigns a quantity to every syllable of one word. `long_at`, when given,
// holds the lexicon's by-nature flags for the word's character positions.
void assign_quantities(std::vector<Syllable>& syllables,
                       const std::vector<bool>* long_at,
                       const NextWordOnset& next = {});

// Onset description of a word, as seen from the previous word's final
// syllable. Used for position length across word boundaries.
NextWordOnset word_onset(std::string_view word);

// 0-based index of the stressed syllable: monosyllables and disyllables
// stress the first; longer words the penult when it is long, else the
// antepenult.
std::size_t accent_position(const std::vector<Syllable>& syllables);

// --- sentence / fragment operations ----------------------------------------

// Syllabified and quantity-annotated word within a sentence.
struct ScannedWord {
    std::string word;
    std::vector<Syllable> syllables;
};

// Deletes word-final syllables ending in a vowel (or vowel + 'm') before a
// word starting with a vowel or 'h'. Survivors keep their order; when a
// multi-syllable word loses its final syllable, the lost onset is carried
// onto the next syllable as "d'a".
std::vector<Syllable> apply_elision(const std::vector<ScannedWord>& words);

// Scans one normalized sentence (tokens separated by spaces, terminated by
// " ."). Words without a nucleus are skipped. The final surviving syllable
// becomes anceps. Returns the empty string when nothing was scannable.
std::string scan_sentence(std::string_view sentence, const MacronLexicon& lexicon);

// Scans every sentence of a fragment. Throws EmptyEncodingError when all
// sentences are unscannable; empty sentences are dropped.
QuantityString scan_fragment(const std::vector<std::string>& sentences,
                             const MacronLexicon& lexicon);

// Stress-based clausula detection over the sentence-final syllables.
// Planus matches the last 5 syllables, tardus 6, velox 7; the longest
// match wins.
CursusPattern detect_cursus(std::string_view sentence, const MacronLexicon& lexicon);

const char* cursus_name(CursusKind kind);

// ASCII {'-','U','X'} -> UTF-8 "−∪X".
std::string render_quantity_string(std::string_view symbols);

}  // namespace stilus
