#include "stilus/prosody.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "stilus/errors.hpp"

namespace stilus {

namespace {

bool is_vowel_letter(char c) {
    return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_diphthong_pair(char a, char b) {
    static constexpr std::array<const char*, 6> kDiphthongs = {"ae", "au", "ei",
                                                               "eu", "oe", "ui"};
    for (const char* d : kDiphthongs)
        if (d[0] == a && d[1] == b) return true;
    return false;
}

// Letter roles within one word, after v->u / j->i normalization. 'u' and
// 'i' sometimes act as consonants: 'u' inside a qu/gu unit, word-initially
// before a vowel ("uir"), or between vowels ("nouus"); 'i' between vowels
// ("troiae"). Classification is left to right so that earlier decisions
// feed later ones.
struct WordAnalysis {
    std::string word;
    std::vector<bool> is_vowel;                          // per character
    std::vector<std::pair<std::size_t, std::size_t>> nuclei;  // (start, length)
};

WordAnalysis analyze(std::string_view word) {
    WordAnalysis a;
    a.word.assign(word);
    const std::size_t n = word.size();
    a.is_vowel.assign(n, false);

    for (std::size_t i = 0; i < n; ++i) {
        const char c = word[i];
        if (!is_vowel_letter(c)) continue;
        if (c == 'u') {
            const bool next_vowel = i + 1 < n && is_vowel_letter(word[i + 1]);
            if (i > 0 && (word[i - 1] == 'q' || word[i - 1] == 'g') && next_vowel)
                continue;  // part of the qu/gu unit
            if (i == 0 && next_vowel) continue;  // consonantal: "uir", "uidit"
            if (i > 0 && a.is_vowel[i - 1] && next_vowel) continue;  // "nouus"
        } else if (c == 'i') {
            if (i > 0 && i + 1 < n && a.is_vowel[i - 1] && is_vowel_letter(word[i + 1]))
                continue;  // consonantal: "troiae", "cuius"
        }
        a.is_vowel[i] = true;
    }

    for (std::size_t i = 0; i < n;) {
        if (!a.is_vowel[i]) {
            ++i;
            continue;
        }
        const bool ui_after_qg =
            word[i] == 'u' && i > 0 && (word[i - 1] == 'q' || word[i - 1] == 'g');
        if (i + 1 < n && a.is_vowel[i + 1] && is_diphthong_pair(word[i], word[i + 1]) &&
            !ui_after_qg) {
            a.nuclei.emplace_back(i, 2);
            i += 2;
        } else {
            a.nuclei.emplace_back(i, 1);
            ++i;
        }
    }
    return a;
}

// Consonant units in [from, to): qu/gu followed by a vowel letter count as
// one two-character unit, everything else as single characters.
struct ConsonantRun {
    int units = 0;
    bool has_double = false;       // contains x or z
    std::size_t first_unit_end = 0;  // end offset of the first unit
};

ConsonantRun consonant_run(const WordAnalysis& a, std::size_t from, std::size_t to) {
    ConsonantRun run;
    std::size_t i = from;
    while (i < to) {
        std::size_t unit_end = i + 1;
        if ((a.word[i] == 'q' || a.word[i] == 'g') && i + 1 < a.word.size() &&
            a.word[i + 1] == 'u' && !a.is_vowel[i + 1])
            unit_end = i + 2;
        if (a.word[i] == 'x' || a.word[i] == 'z') run.has_double = true;
        if (run.units == 0) run.first_unit_end = unit_end;
        ++run.units;
        i = unit_end;
    }
    return run;
}

std::vector<Syllable> build_syllables(const WordAnalysis& a) {
    std::vector<Syllable> out;
    const std::size_t m = a.nuclei.size();
    std::size_t start = 0;
    for (std::size_t j = 0; j < m; ++j) {
        const auto [ns, nl] = a.nuclei[j];
        std::size_t end;
        if (j + 1 < m) {
            const std::size_t next_start = a.nuclei[j + 1].first;
            const ConsonantRun run = consonant_run(a, ns + nl, next_start);
            // One consonant (or none) opens the next syllable; of a longer
            // cluster the first unit closes this one.
            end = run.units >= 2 ? run.first_unit_end : ns + nl;
        } else {
            end = a.word.size();
        }
        Syllable s;
        s.text = a.word.substr(start, end - start);
        s.nucleus = a.word.substr(ns, nl);
        out.push_back(std::move(s));
        start = end;
    }
    return out;
}

bool starts_vocalic(const WordAnalysis& a) {
    if (a.word.empty()) return false;
    return a.word.front() == 'h' || a.is_vowel.front();
}

}  // namespace

std::vector<Syllable> syllabify(std::string_view word) {
    const WordAnalysis a = analyze(word);
    if (a.nuclei.empty()) throw NoNucleusError(a.word);
    return build_syllables(a);
}

void assign_quantities(std::vector<Syllable>& syllables, const std::vector<bool>* long_at,
                       const NextWordOnset& next) {
    std::string word;
    for (const Syllable& s : syllables) word += s.text;
    const WordAnalysis a = analyze(word);
    const std::size_t m = a.nuclei.size();

    for (std::size_t j = 0; j < m && j < syllables.size(); ++j) {
        const auto [ns, nl] = a.nuclei[j];
        Quantity q = Quantity::Short;
        bool by_nature = nl == 2;  // diphthong
        if (!by_nature && long_at) {
            for (std::size_t k = ns; k < ns + nl && k < long_at->size(); ++k)
                if ((*long_at)[k]) by_nature = true;
        }
        if (by_nature) {
            q = Quantity::Long;
        } else {
            const std::size_t to = j + 1 < m ? a.nuclei[j + 1].first : word.size();
            ConsonantRun run = consonant_run(a, ns + nl, to);
            if (j + 1 == m) {
                run.units += next.consonant_units;
                run.has_double = run.has_double || next.has_double;
            }
            if (run.has_double || run.units >= 2) q = Quantity::Long;
        }
        syllables[j].quantity = q;
    }
}

NextWordOnset word_onset(std::string_view word) {
    const WordAnalysis a = analyze(word);
    NextWordOnset onset;
    onset.starts_vocalic = starts_vocalic(a);
    const std::size_t stop = a.nuclei.empty() ? a.word.size() : a.nuclei.front().first;
    const ConsonantRun run = consonant_run(a, 0, stop);
    onset.consonant_units = run.units;
    onset.has_double = run.has_double;
    return onset;
}

std::size_t accent_position(const std::vector<Syllable>& syllables) {
    const std::size_t n = syllables.size();
    if (n <= 2) return 0;
    return syllables[n - 2].quantity == Quantity::Long ? n - 2 : n - 3;
}

std::vector<Syllable> apply_elision(const std::vector<ScannedWord>& words) {
    std::vector<Syllable> out;
    std::string carry;
    for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<Syllable> sylls = words[i].syllables;
        if (!carry.empty() && !sylls.empty()) {
            sylls.front().text = carry + sylls.front().text;
            carry.clear();
        }
        if (i + 1 < words.size() && !sylls.empty()) {
            const Syllable& last = sylls.back();
            const std::string vowel_m = last.nucleus + "m";
            const bool open_ending = last.text.ends_with(last.nucleus) ||
                                     last.text.ends_with(vowel_m);
            if (open_ending && word_onset(words[i + 1].word).starts_vocalic) {
                const std::size_t suffix =
                    last.text.ends_with(vowel_m) ? vowel_m.size() : last.nucleus.size();
                std::string onset = last.text.substr(0, last.text.size() - suffix);
                if (sylls.size() >= 2 && !onset.empty()) carry = onset + "'";
                sylls.pop_back();
            }
        }
        out.insert(out.end(), sylls.begin(), sylls.end());
    }
    return out;
}

std::string scan_sentence(std::string_view sentence, const MacronLexicon& lexicon) {
    std::vector<ScannedWord> words;
    std::string token;
    std::istringstream in{std::string(sentence)};
    while (in >> token) {
        if (token == ".") continue;
        try {
            ScannedWord w;
            w.word = token;
            w.syllables = syllabify(token);
            words.push_back(std::move(w));
        } catch (const NoNucleusError&) {
            // residue with no vowel; drop
        }
    }
    if (words.empty()) return {};

    for (std::size_t i = 0; i < words.size(); ++i) {
        const NextWordOnset next =
            i + 1 < words.size() ? word_onset(words[i + 1].word) : NextWordOnset{};
        assign_quantities(words[i].syllables, lexicon.lookup(words[i].word), next);
    }

    const std::vector<Syllable> sylls = apply_elision(words);
    std::string symbols;
    symbols.reserve(sylls.size());
    for (const Syllable& s : sylls)
        symbols.push_back(s.quantity == Quantity::Long ? kLongSym : kShortSym);
    if (!symbols.empty()) symbols.back() = kAncepsSym;
    return symbols;
}

QuantityString scan_fragment(const std::vector<std::string>& sentences,
                             const MacronLexicon& lexicon) {
    QuantityString qs;
    for (const std::string& sentence : sentences) {
        const std::string seg = scan_sentence(sentence, lexicon);
        if (seg.empty()) continue;
        qs.symbols += seg;
        qs.sentence_boundaries.push_back(qs.symbols.size());
    }
    if (qs.symbols.empty())
        throw EmptyEncodingError("fragment has no scannable sentence");
    return qs;
}

std::vector<std::string> QuantityString::segments() const {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t end : sentence_boundaries) {
        out.push_back(symbols.substr(start, end - start));
        start = end;
    }
    return out;
}

CursusPattern detect_cursus(std::string_view sentence, const MacronLexicon& lexicon) {
    std::vector<ScannedWord> words;
    std::string token;
    std::istringstream in{std::string(sentence)};
    while (in >> token) {
        if (token == ".") continue;
        try {
            ScannedWord w;
            w.word = token;
            w.syllables = syllabify(token);
            words.push_back(std::move(w));
        } catch (const NoNucleusError&) {
        }
    }

    std::vector<bool> stressed;
    for (std::size_t i = 0; i < words.size(); ++i) {
        const NextWordOnset next =
            i + 1 < words.size() ? word_onset(words[i + 1].word) : NextWordOnset{};
        assign_quantities(words[i].syllables, lexicon.lookup(words[i].word), next);
        const std::size_t accent = accent_position(words[i].syllables);
        for (std::size_t k = 0; k < words[i].syllables.size(); ++k)
            stressed.push_back(k == accent);
    }

    const std::size_t n = stressed.size();
    const auto tail = [&](std::size_t k) {
        std::string t;
        for (std::size_t i = n - k; i < n; ++i) t += stressed[i] ? '-' : '+';
        return t;
    };

    CursusPattern p;
    p.stress_string = tail(std::min<std::size_t>(n, 7));
    if (n >= 7 && tail(7) == "-++++-+") {
        p.kind = CursusKind::Velox;
        p.stress_string = tail(7);
    } else if (n >= 6 && tail(6) == "-++-++") {
        p.kind = CursusKind::Tardus;
        p.stress_string = tail(6);
    } else if (n >= 5 && tail(5) == "-++-+") {
        p.kind = CursusKind::Planus;
        p.stress_string = tail(5);
    }
    return p;
}

const char* cursus_name(CursusKind kind) {
    switch (kind) {
        case CursusKind::Planus: return "planus";
        case CursusKind::Tardus: return "tardus";
        case CursusKind::Velox: return "velox";
        case CursusKind::None: break;
    }
    return "none";
}

std::string render_quantity_string(std::string_view symbols) {
    std::string out;
    out.reserve(symbols.size() * 3);
    for (char c : symbols) {
        switch (c) {
            case kLongSym: out += "−"; break;   // −
            case kShortSym: out += "∪"; break;  // ∪
            default: out += c;
        }
    }
    return out;
}

// --- MacronLexicon -----------------------------------------------------------

void MacronLexicon::add(const std::string& word, const std::vector<bool>& long_at) {
    entries_[word] = long_at;
}

void MacronLexicon::add_marked(std::string_view marked) {
    std::string word;
    std::vector<bool> flags;
    for (char c : marked) {
        if (c == ':') {
            if (word.empty() || !is_vowel_letter(word.back()))
                throw Error("macron mark after non-vowel in '" + std::string(marked) + "'");
            flags.back() = true;
        } else {
            word.push_back(c);
            flags.push_back(false);
        }
    }
    if (word.empty()) throw Error("empty lexicon entry");
    entries_[word] = std::move(flags);
}

const std::vector<bool>* MacronLexicon::lookup(const std::string& word) const {
    const auto it = entries_.find(word);
    return it == entries_.end() ? nullptr : &it->second;
}

MacronLexicon MacronLexicon::parse(std::string_view text) {
    MacronLexicon lex;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream fields(line);
        std::string word, marked;
        if (!(fields >> word) || word.front() == '#') continue;
        if (!(fields >> marked)) {
            marked = word;  // single-column form: word given directly in colon notation
            word.erase(std::remove(word.begin(), word.end(), ':'), word.end());
        }
        std::string stripped = marked;
        stripped.erase(std::remove(stripped.begin(), stripped.end(), ':'), stripped.end());
        if (stripped != word)
            throw Error("lexicon line " + std::to_string(lineno) + ": key '" + word +
                        "' does not match marked form '" + marked + "'");
        lex.add_marked(marked);
    }
    return lex;
}

MacronLexicon MacronLexicon::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open lexicon file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

}  // namespace stilus
