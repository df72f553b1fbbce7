#include "stilus/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "stilus/errors.hpp"
#include "stilus/rng.hpp"

namespace stilus {

namespace {

// Accented vowel -> plain lowercase vowel (Latin-1 Supplement and the
// macron/breve range of Latin Extended-A). Ligatures ae/oe expand so the
// diphthong survives. Everything else non-ASCII is editorial noise.
std::string fold_codepoint(char32_t cp) {
    if (cp >= 0x300 && cp <= 0x36f) return "";  // combining marks: keep the base
    switch (cp) {
        case U'à': case U'á': case U'â': case U'ã':
        case U'ä': case U'å': case U'ā': case U'ă':
        case U'À': case U'Á': case U'Â': case U'Ã':
        case U'Ä': case U'Å': case U'Ā': case U'Ă':
            return "a";
        case U'è': case U'é': case U'ê': case U'ë':
        case U'ē': case U'ĕ':
        case U'È': case U'É': case U'Ê': case U'Ë':
        case U'Ē': case U'Ĕ':
            return "e";
        case U'ì': case U'í': case U'î': case U'ï':
        case U'ī': case U'ĭ':
        case U'Ì': case U'Í': case U'Î': case U'Ï':
        case U'Ī': case U'Ĭ':
            return "i";
        case U'ò': case U'ó': case U'ô': case U'õ':
        case U'ö': case U'ō': case U'ŏ':
        case U'Ò': case U'Ó': case U'Ô': case U'Õ':
        case U'Ö': case U'Ō': case U'Ŏ':
            return "o";
        case U'ù': case U'ú': case U'û': case U'ü':
        case U'ū': case U'ŭ':
        case U'Ù': case U'Ú': case U'Û': case U'Ü':
        case U'Ū': case U'Ŭ':
            return "u";
        case U'ý': case U'ÿ': case U'Ý':
            return "y";
        case U'æ': case U'Æ': return "ae";
        case U'œ': case U'Œ': return "oe";
        case U'…': return ".";  // suspension points
        default: return "";
    }
}

// Minimal UTF-8 decoding; malformed bytes are dropped like other symbols.
char32_t decode_utf8(std::string_view s, std::size_t& i) {
    const unsigned char b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = b0;
    if (b0 >= 0xf0) { len = 4; cp = b0 & 0x07; }
    else if (b0 >= 0xe0) { len = 3; cp = b0 & 0x0f; }
    else if (b0 >= 0xc0) { len = 2; cp = b0 & 0x1f; }
    for (std::size_t k = 1; k < len; ++k) {
        if (i + k >= s.size()) { i = s.size(); return 0xfffd; }
        cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3f);
    }
    i += len;
    return cp;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(text)};
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const std::string& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

}  // namespace

std::string clean_text(std::string_view raw) {
    std::string flat;
    flat.reserve(raw.size());

    bool in_tag = false;
    std::size_t i = 0;
    while (i < raw.size()) {
        const char c = raw[i];
        if (static_cast<unsigned char>(c) < 0x80) {
            ++i;
            if (c == '<') { in_tag = true; continue; }
            if (c == '>') { in_tag = false; continue; }
            if (in_tag) continue;
            if (c >= 'A' && c <= 'Z') flat += static_cast<char>(c - 'A' + 'a');
            else if (c >= 'a' && c <= 'z') flat += c;
            else if (c == '?' || c == '!' || c == ';' || c == ':' || c == '.') flat += '.';
            else if (std::isspace(static_cast<unsigned char>(c))) flat += ' ';
            // commas, digits and remaining symbols are dropped
        } else {
            const char32_t cp = decode_utf8(raw, i);
            if (!in_tag) flat += fold_codepoint(cp);
        }
    }

    for (char& c : flat) {
        if (c == 'v') c = 'u';
        else if (c == 'j') c = 'i';
    }

    // Isolate periods, then drop empty sentences left by '...' runs or by
    // punctuation-only stretches.
    std::string spaced;
    spaced.reserve(flat.size() + 16);
    for (char c : flat) {
        if (c == '.') spaced += " . ";
        else spaced += c;
    }

    std::vector<std::string> tokens;
    bool last_was_period = true;  // also swallows leading periods
    for (std::string& t : tokenize(spaced)) {
        const bool is_period = t == ".";
        if (is_period && last_was_period) continue;
        last_was_period = is_period;
        tokens.push_back(std::move(t));
    }

    if (tokens.empty() || (tokens.size() == 1 && tokens[0] == "."))
        throw EmptyDocumentError("document is empty after cleaning");
    return join(tokens);
}

std::vector<std::string> split_sentences(std::string_view normalized) {
    const std::vector<std::string> tokens = tokenize(normalized);

    std::vector<std::vector<std::string>> raw;
    std::vector<std::string> current;
    for (const std::string& t : tokens) {
        if (t == ".") {
            if (!current.empty()) raw.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(t);
        }
    }
    if (!current.empty()) raw.push_back(std::move(current));
    if (raw.empty()) throw EmptyDocumentError("text has no sentences");

    // A sentence needs at least 5 distinct words; shorter ones attach to
    // the next sentence, or to the previous one when last.
    std::vector<std::vector<std::string>> merged;
    std::vector<std::string> pending;
    for (std::vector<std::string>& s : raw) {
        pending.insert(pending.end(), s.begin(), s.end());
        const std::set<std::string> distinct(pending.begin(), pending.end());
        if (distinct.size() >= 5) {
            merged.push_back(std::move(pending));
            pending.clear();
        }
    }
    if (!pending.empty()) {
        if (merged.empty()) merged.push_back(std::move(pending));
        else
            merged.back().insert(merged.back().end(), pending.begin(), pending.end());
    }

    std::vector<std::string> out;
    out.reserve(merged.size());
    for (const std::vector<std::string>& s : merged) out.push_back(join(s) + " .");
    return out;
}

std::string Fragment::text() const {
    std::string out;
    for (const std::string& s : sentences) {
        if (!out.empty()) out += ' ';
        out += s;
    }
    return out;
}

std::vector<Fragment> make_fragments(const std::vector<std::string>& sentences,
                                     const std::string& author,
                                     const std::string& document, std::size_t size) {
    std::vector<Fragment> out;
    const std::size_t n = sentences.size();
    const std::size_t keep_threshold = (size + 1) / 2;
    std::size_t i = 0;
    while (i < n) {
        const std::size_t remaining = n - i;
        std::size_t take = std::min(size, remaining);
        // A trailing remainder shorter than size/2 joins this window
        // instead of becoming an undersized fragment of its own.
        if (remaining > size && remaining - size < keep_threshold) take = remaining;
        Fragment f;
        f.author = author;
        f.document = document;
        f.ordinal = out.size();
        f.sentences.assign(sentences.begin() + static_cast<std::ptrdiff_t>(i),
                           sentences.begin() + static_cast<std::ptrdiff_t>(i + take));
        out.push_back(std::move(f));
        i += take;
    }
    return out;
}

SplitPlan stratified_split(const std::vector<Fragment>& fragments, std::uint64_t seed) {
    std::map<std::string, std::vector<std::size_t>> by_author;
    for (std::size_t i = 0; i < fragments.size(); ++i)
        by_author[fragments[i].author].push_back(i);

    SplitPlan plan;
    plan.seed = seed;
    SplitMix64 rng(seed);

    for (auto& [author, indices] : by_author) {
        if (indices.size() < 3)
            throw StratificationError("author '" + author + "' has only " +
                                      std::to_string(indices.size()) +
                                      " fragments; at least 3 are required");
        shuffle(indices, rng);

        const double n = static_cast<double>(indices.size());
        const double quota[3] = {0.81 * n, 0.09 * n, 0.10 * n};
        std::size_t count[3];
        double remainder[3];
        std::size_t assigned = 0;
        for (int k = 0; k < 3; ++k) {
            count[k] = static_cast<std::size_t>(quota[k]);
            remainder[k] = quota[k] - static_cast<double>(count[k]);
            assigned += count[k];
        }
        while (assigned < indices.size()) {
            int best = 0;
            for (int k = 1; k < 3; ++k)
                if (remainder[k] > remainder[best]) best = k;
            ++count[best];
            remainder[best] = -1.0;
            ++assigned;
        }

        std::size_t pos = 0;
        for (std::size_t k = 0; k < count[0]; ++k) plan.train.push_back(indices[pos++]);
        for (std::size_t k = 0; k < count[1]; ++k)
            plan.validation.push_back(indices[pos++]);
        for (std::size_t k = 0; k < count[2]; ++k) plan.test.push_back(indices[pos++]);
    }
    return plan;
}

std::uint64_t SplitPlan::hash() const {
    std::uint64_t h = fnv1a("split-plan");
    const auto mix = [&h](std::uint64_t v) {
        for (int k = 0; k < 8; ++k) {
            h ^= (v >> (k * 8)) & 0xff;
            h *= 1099511628211ULL;
        }
    };
    mix(seed);
    for (const auto* part : {&train, &validation, &test}) {
        mix(part->size());
        for (std::size_t i : *part) mix(i);
    }
    return h;
}

std::vector<Document> load_documents(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<Document> documents;
    for (const std::filesystem::path& file : files) {
        const std::string stem = file.stem().string();
        const std::size_t sep = stem.find('_');

        Document doc;
        doc.author = sep == std::string::npos ? stem : stem.substr(0, sep);
        doc.title = stem;
        if (doc.author.empty())
            throw Error("corpus file '" + file.string() + "' has an empty author label");

        std::ifstream in(file);
        if (!in) throw Error("cannot open corpus file: " + file.string());
        std::ostringstream buf;
        buf << in.rdbuf();
        doc.text = buf.str();
        documents.push_back(std::move(doc));
    }
    return documents;
}

std::vector<Fragment> fragment_document(const Document& doc, std::size_t size) {
    try {
        const std::string cleaned = clean_text(doc.text);
        return make_fragments(split_sentences(cleaned), doc.author, doc.title, size);
    } catch (const EmptyDocumentError&) {
        throw EmptyDocumentError("document '" + doc.title + "' by '" + doc.author +
                                 "' is empty after cleaning");
    }
}

std::vector<Fragment> load_corpus(const std::filesystem::path& dir,
                                  std::size_t fragment_size) {
    std::vector<Fragment> fragments;
    for (const Document& doc : load_documents(dir)) {
        std::vector<Fragment> f = fragment_document(doc, fragment_size);
        fragments.insert(fragments.end(), std::make_move_iterator(f.begin()),
                         std::make_move_iterator(f.end()));
    }
    if (fragments.empty())
        throw EmptyDocumentError("corpus directory '" + dir.string() +
                                 "' yielded no fragments");
    return fragments;
}

}  // namespace stilus
