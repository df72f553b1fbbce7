#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "stilus/corpus.hpp"
#include "stilus/distortion.hpp"
#include "stilus/errors.hpp"
#include "stilus/features.hpp"
#include "stilus/harness.hpp"
#include "stilus/prosody.hpp"

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw stilus::Error("cannot open input file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int cmd_scan(const std::string& input, const std::string& lexicon_path,
             bool per_sentence, bool cursus) {
    stilus::MacronLexicon lexicon;
    if (!lexicon_path.empty()) lexicon = stilus::MacronLexicon::load(lexicon_path);

    const std::string cleaned = stilus::clean_text(read_file(input));
    const std::vector<std::string> sentences = stilus::split_sentences(cleaned);

    if (per_sentence || cursus) {
        for (const std::string& sentence : sentences) {
            const std::string segment = stilus::scan_sentence(sentence, lexicon);
            if (segment.empty()) continue;
            std::cout << stilus::render_quantity_string(segment);
            if (cursus) {
                const stilus::CursusPattern p = stilus::detect_cursus(sentence, lexicon);
                std::cout << '\t' << stilus::cursus_name(p.kind);
            }
            std::cout << '\n';
        }
    } else {
        const stilus::QuantityString qs = stilus::scan_fragment(sentences, lexicon);
        std::cout << stilus::render_quantity_string(qs.symbols) << '\n';
    }
    return 0;
}

int cmd_encode(const std::string& method_name, const std::string& input,
               const std::string& lexicon_path, std::uint64_t seed) {
    const stilus::ViewMethod method = stilus::view_method_from_name(method_name);
    const std::string cleaned = stilus::clean_text(read_file(input));
    const std::vector<std::string> sentences = stilus::split_sentences(cleaned);

    std::string text;
    for (const std::string& s : sentences) {
        if (!text.empty()) text += ' ';
        text += s;
    }

    switch (method) {
        case stilus::ViewMethod::SQ: {
            stilus::MacronLexicon lexicon;
            if (!lexicon_path.empty()) lexicon = stilus::MacronLexicon::load(lexicon_path);
            const stilus::EncodedView view = stilus::sq_encode(sentences, lexicon);
            std::cout << view.text << '\n';
            break;
        }
        case stilus::ViewMethod::FAKE: {
            const stilus::FakeDictionary dict(seed);
            const stilus::EncodedView view = stilus::fake_encode(text, dict);
            std::cout << stilus::render_quantity_string(view.text) << '\n';
            break;
        }
        default: {
            const stilus::EncodedView view =
                stilus::distort(text, method, stilus::FunctionWordList::latin());
            std::cout << view.text << '\n';
        }
    }
    return 0;
}

int cmd_featurize(const std::string& corpus_dir, std::uint64_t seed,
                  const std::string& out_dir, const std::string& lexicon_path,
                  const std::vector<std::string>& blocks) {
    namespace fs = std::filesystem;
    using stilus::EncodedView;
    using stilus::ViewMethod;

    const std::vector<stilus::Fragment> fragments = stilus::load_corpus(corpus_dir);
    const stilus::SplitPlan split = stilus::stratified_split(fragments, seed);
    stilus::MacronLexicon lexicon;
    if (!lexicon_path.empty()) lexicon = stilus::MacronLexicon::load(lexicon_path);
    const stilus::FakeDictionary fake_dict(seed ^ 0xfa4ed1c7ULL);

    fs::create_directories(out_dir);

    {
        std::vector<char> partition(fragments.size(), '?');
        for (std::size_t i : split.train) partition[i] = 't';
        for (std::size_t i : split.validation) partition[i] = 'v';
        for (std::size_t i : split.test) partition[i] = 'e';
        std::ofstream out(fs::path(out_dir) / "split.json");
        out << "{\n  \"seed\": " << seed << ",\n  \"hash\": " << split.hash()
            << ",\n  \"fragments\": [\n";
        for (std::size_t i = 0; i < fragments.size(); ++i) {
            const char* part = partition[i] == 't'   ? "train"
                               : partition[i] == 'v' ? "validation"
                                                     : "test";
            out << "    {\"index\": " << i << ", \"author\": \"" << fragments[i].author
                << "\", \"document\": \"" << fragments[i].document
                << "\", \"ordinal\": " << fragments[i].ordinal << ", \"partition\": \""
                << part << "\"}" << (i + 1 < fragments.size() ? "," : "") << "\n";
        }
        out << "  ]\n}\n";
    }

    const auto views_of = [&](ViewMethod m) {
        std::vector<EncodedView> views;
        views.reserve(fragments.size());
        for (const stilus::Fragment& f : fragments) {
            if (m == ViewMethod::SQ) {
                try {
                    views.push_back(stilus::sq_encode(f.sentences, lexicon));
                } catch (const stilus::EmptyEncodingError&) {
                    views.push_back(EncodedView{ViewMethod::SQ, "", {}});
                }
            } else if (m == ViewMethod::FAKE) {
                views.push_back(stilus::fake_encode(f.text(), fake_dict));
            } else {
                views.push_back(stilus::distort(f.text(), m, stilus::FunctionWordList::latin()));
            }
        }
        return views;
    };

    for (const std::string& block : blocks) {
        const fs::path triplets = fs::path(out_dir) / (block + ".triplets");
        if (block == "bfs") {
            std::vector<const stilus::Fragment*> ptrs;
            for (const stilus::Fragment& f : fragments) ptrs.push_back(&f);
            stilus::base_feature_matrix(ptrs).save_triplets(triplets);
            continue;
        }
        const ViewMethod m = stilus::view_method_from_name(block);
        const stilus::NGramSpec spec = (m == ViewMethod::SQ || m == ViewMethod::FAKE)
                                           ? stilus::NGramSpec::sq()
                                           : stilus::NGramSpec::dv();
        std::vector<EncodedView> all = views_of(m);
        std::vector<EncodedView> train_views;
        for (std::size_t i : split.train) train_views.push_back(all[i]);
        const stilus::FeatureSpace space = stilus::fit_space(train_views, spec);
        stilus::transform(all, space).save_triplets(triplets);
        space.save_vocabulary(fs::path(out_dir) / (block + ".vocab"));
    }
    return 0;
}

int cmd_experiment(const stilus::ExperimentConfig& config, const std::string& out_path,
                   const std::string& table) {
    const stilus::ExperimentReport report = stilus::run_experiment(config);
    const std::string json = stilus::report_to_json(report);
    if (out_path.empty() || out_path == "-") {
        std::cout << json;
    } else {
        std::ofstream out(out_path);
        if (!out) throw stilus::Error("cannot write report: " + out_path);
        out << json;
    }
    if (table == "md") std::cout << stilus::report_to_markdown(report);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Latin stylometry toolkit: syllabic-quantity scansion, text "
                 "distortion, and authorship-attribution experiments"};
    app.require_subcommand(1);

    std::string input, lexicon, corpus, out, method, table;
    std::uint64_t seed = 0;
    bool per_sentence = false, cursus = false;
    std::vector<std::string> blocks = {"bfs", "dvma", "dvsa", "dvex", "dvl2", "sq", "fake"};
    stilus::ExperimentConfig config;

    CLI::App* scan = app.add_subcommand("scan", "print quantity strings for a text");
    scan->add_option("--input", input, "input text file")->required();
    scan->add_option("--lexicon", lexicon, "macron lexicon file");
    scan->add_flag("--per-sentence", per_sentence, "one line per sentence");
    scan->add_flag("--cursus", cursus, "append detected cursus kinds");

    CLI::App* encode = app.add_subcommand("encode", "write an encoded view to stdout");
    encode->add_option("--method", method, "dvma|dvsa|dvex|dvl2|fake|sq")->required();
    encode->add_option("--input", input, "input text file")->required();
    encode->add_option("--lexicon", lexicon, "macron lexicon file");
    encode->add_option("--seed", seed, "seed for the fake dictionary");

    CLI::App* feat = app.add_subcommand("featurize", "emit split plan and feature matrices");
    feat->add_option("--corpus", corpus, "corpus directory of Author_Title.txt files")
        ->required();
    feat->add_option("--seed", seed, "split seed");
    feat->add_option("--out", out, "output directory")->required();
    feat->add_option("--lexicon", lexicon, "macron lexicon file");
    feat->add_option("--blocks", blocks, "feature blocks to emit");

    CLI::App* exp = app.add_subcommand("experiment", "run the attribution experiment");
    exp->add_option("--corpus", config.corpus_dir, "corpus directory")->required();
    exp->add_option("--lexicon", config.lexicon_path, "macron lexicon file");
    exp->add_option("--seed", config.seed, "experiment seed");
    exp->add_option("--setups", config.setups, "feature setups to run");
    exp->add_option("--out", out, "report path (default stdout)");
    exp->add_option("--table", table, "also render a comparison table (md)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scan->parsed()) return cmd_scan(input, lexicon, per_sentence, cursus);
        if (encode->parsed()) return cmd_encode(method, input, lexicon, seed);
        if (feat->parsed()) return cmd_featurize(corpus, seed, out, lexicon, blocks);
        if (exp->parsed()) return cmd_experiment(config, out, table);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
