#include "stilus/distortion.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "stilus/errors.hpp"
#include "stilus/rng.hpp"

namespace stilus {

namespace {

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

std::string mask_token(const std::string& token, ViewMethod method) {
    const std::size_t n = token.size();
    switch (method) {
        case ViewMethod::DVSA:
            return "*";
        case ViewMethod::DVMA:
            return std::string(n, '*');
        case ViewMethod::DVEX:
            if (n <= 2) return token;
            return token.front() + std::string(n - 2, '*') + token.back();
        case ViewMethod::DVL2:
            if (n <= 2) return token;
            return std::string(n - 2, '*') + token.substr(n - 2);
        default:
            throw Error("mask_token: not a distortion method");
    }
}

}  // namespace

const char* view_method_name(ViewMethod m) {
    switch (m) {
        case ViewMethod::DVMA: return "DVMA";
        case ViewMethod::DVSA: return "DVSA";
        case ViewMethod::DVEX: return "DVEX";
        case ViewMethod::DVL2: return "DVL2";
        case ViewMethod::FAKE: return "FAKE";
        case ViewMethod::SQ: return "SQ";
    }
    return "?";
}

ViewMethod view_method_from_name(std::string_view name) {
    std::string upper(name);
    for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (upper == "DVMA") return ViewMethod::DVMA;
    if (upper == "DVSA") return ViewMethod::DVSA;
    if (upper == "DVEX") return ViewMethod::DVEX;
    if (upper == "DVL2") return ViewMethod::DVL2;
    if (upper == "FAKE") return ViewMethod::FAKE;
    if (upper == "SQ") return ViewMethod::SQ;
    throw Error("unknown encoding method: " + std::string(name));
}

FunctionWordList::FunctionWordList(std::vector<std::string> words)
    : words_(std::move(words)), set_(words_.begin(), words_.end()) {
    if (set_.size() != words_.size()) throw Error("function word list has duplicates");
}

bool FunctionWordList::contains(std::string_view token) const {
    return set_.count(std::string(token)) > 0;
}

const FunctionWordList& FunctionWordList::latin() {
    static const FunctionWordList list({
        "a",      "ab",      "ac",       "ad",      "adhuc",  "ante",    "apud",
        "atque",  "aut",     "autem",    "circa",   "contra", "cum",     "de",
        "dum",    "e",       "enim",     "ergo",    "et",     "etiam",   "ex",
        "hec",    "iam",     "ibi",      "ideo",    "idest",  "igitur",  "in",
        "inde",   "inter",   "ita",      "licet",   "nam",    "ne",      "nec",
        "nisi",   "non",     "nunc",     "nunquam", "ob",     "olim",    "per",
        "post",   "postea",  "pro",      "propter", "quando", "quasi",   "que",
        "quia",   "quidem",  "quomodo",  "quoniam", "quoque", "quot",    "satis",
        "scilicet", "sed",   "semper",   "seu",     "si",     "sic",     "sicut",
        "sine",   "siue",    "statim",   "sub",     "super",  "supra",   "tam",
        "tamen",  "tunc",    "ubi",      "uel",     "uelut",  "uero",    "uidelicet",
        "unde",   "usque",   "ut",
    });
    return list;
}

EncodedView distort(std::string_view text, ViewMethod method, const FunctionWordList& f) {
    if (method != ViewMethod::DVMA && method != ViewMethod::DVSA &&
        method != ViewMethod::DVEX && method != ViewMethod::DVL2)
        throw Error("distort expects one of the DV methods");

    std::vector<std::string> out;
    for (const std::string& token : tokenize(text)) {
        if (token == "." || f.contains(token)) out.push_back(token);
        else out.push_back(mask_token(token, method));
    }
    return EncodedView{method, join(out), {}};
}

std::string FakeDictionary::lookup(std::string_view word) const {
    std::scoped_lock lock(mutex_);
    const auto it = memo_.find(std::string(word));
    if (it != memo_.end()) return it->second;

    const std::size_t len = word.size();
    // round-half-up of len/3, at least one symbol
    const std::size_t symbols = std::max<std::size_t>(1, (2 * len + 3) / 6);
    SplitMix64 rng(fnv1a(word) ^ (seed_ * 0x9e3779b97f4a7c15ULL));
    static constexpr char kAlphabet[3] = {kShortSym, kLongSym, kAncepsSym};
    std::string value;
    value.reserve(symbols);
    for (std::size_t i = 0; i < symbols; ++i)
        value.push_back(kAlphabet[rng.below(3)]);
    memo_.emplace(std::string(word), value);
    return value;
}

EncodedView fake_encode(std::string_view text, const FakeDictionary& dict) {
    std::vector<std::string> out;
    std::vector<std::string> segments;
    std::string current;
    for (const std::string& token : tokenize(text)) {
        if (token == ".") {
            out.emplace_back(1, kAncepsSym);
            current.push_back(kAncepsSym);
            segments.push_back(std::move(current));
            current.clear();
        } else {
            std::string enc = dict.lookup(token);
            current += enc;
            out.push_back(std::move(enc));
        }
    }
    if (!current.empty()) segments.push_back(std::move(current));
    return EncodedView{ViewMethod::FAKE, join(out), std::move(segments)};
}

EncodedView sq_encode(const std::vector<std::string>& sentences,
                      const MacronLexicon& lexicon) {
    const QuantityString qs = scan_fragment(sentences, lexicon);
    EncodedView view;
    view.method = ViewMethod::SQ;
    view.segments = qs.segments();
    for (const std::string& seg : view.segments) {
        if (!view.text.empty()) view.text += '\n';
        view.text += render_quantity_string(seg);
    }
    return view;
}

std::vector<EncodedView> all_views(std::string_view text, const FunctionWordList& f) {
    std::vector<EncodedView> views;
    views.reserve(4);
    for (ViewMethod m :
         {ViewMethod::DVMA, ViewMethod::DVSA, ViewMethod::DVEX, ViewMethod::DVL2})
        views.push_back(distort(text, m, f));
    return views;
}

}  // namespace stilus
