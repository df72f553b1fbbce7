#include <doctest.h>

#include <fstream>
#include <set>

#include "stilus/corpus.hpp"
#include "stilus/errors.hpp"
#include "stilus/rng.hpp"

using namespace stilus;

TEST_SUITE_BEGIN("corpus");

TEST_CASE("clean_text applies the normalization rules in order") {
    CHECK(clean_text("Vjdit, et 12 abiit?") == "uidit et abiit .");
    CHECK(clean_text("iam") == "iam");
    CHECK(clean_text("Quò") == "quo");
    CHECK(clean_text("Arma virumque cano.") == "arma uirumque cano .");
    CHECK(clean_text("unus; duo: tres! quattuor... quinque") ==
          "unus . duo . tres . quattuor . quinque");
    CHECK(clean_text("<note editor=x>senatus</note> populusque") ==
          "senatus populusque");
    CHECK(clean_text("cāra mēns") == "cara mens");   // macrons fold
    CHECK(clean_text("ædem pœnas") == "aedem poenas");  // ligatures expand
    CHECK(clean_text("a(b) *c* [d] 3,14") == "ab c d");
}

TEST_CASE("clean_text rejects empty documents") {
    CHECK_THROWS_AS(clean_text(""), EmptyDocumentError);
    CHECK_THROWS_AS(clean_text("123 !!! ..."), EmptyDocumentError);
    CHECK_THROWS_AS(clean_text("<tag></tag>"), EmptyDocumentError);
}

TEST_CASE("clean_text is idempotent with a closed alphabet") {
    SplitMix64 rng(31337);
    const std::string pool =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .,;:!?()<>*";
    for (int trial = 0; trial < 300; ++trial) {
        std::string raw = "seed text ";
        const std::size_t len = 1 + rng.below(120);
        for (std::size_t i = 0; i < len; ++i) raw += pool[rng.below(pool.size())];
        const std::string once = clean_text(raw);
        CHECK(clean_text(once) == once);
        for (char c : once) {
            const bool ok = (c >= 'a' && c <= 'z') || c == ' ' || c == '.';
            REQUIRE(ok);
            REQUIRE(c != 'v');
            REQUIRE(c != 'j');
        }
    }
}

TEST_CASE("split_sentences merges short sentences") {
    SUBCASE("short last sentence merges backward") {
        CHECK(split_sentences("a b c d e . f g .") ==
              std::vector<std::string>{"a b c d e f g ."});
    }
    SUBCASE("a sentence needs five distinct tokens") {
        CHECK(split_sentences("a a a a a .") == std::vector<std::string>{"a a a a a ."});
        CHECK(split_sentences("a a a a a . b c d e .") ==
              std::vector<std::string>{"a a a a a b c d e ."});
    }
    SUBCASE("exactly five distinct stands alone") {
        CHECK(split_sentences("alpha beta gamma delta epsilon .") ==
              std::vector<std::string>{"alpha beta gamma delta epsilon ."});
    }
    SUBCASE("short sentences chain onto the next") {
        CHECK(split_sentences("a b . c d . e f g h i j .") ==
              std::vector<std::string>{"a b c d e f g h i j ."});
    }
    SUBCASE("trailing text without a period is a sentence") {
        CHECK(split_sentences("a b c d e f") ==
              std::vector<std::string>{"a b c d e f ."});
    }
    SUBCASE("no sentences is an error") {
        CHECK_THROWS_AS(split_sentences(""), EmptyDocumentError);
        CHECK_THROWS_AS(split_sentences(" . "), EmptyDocumentError);
    }
}

TEST_CASE("make_fragments windows sentences") {
    const auto sentences = [](std::size_t n) {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < n; ++i)
            out.push_back("sentence number " + std::to_string(i) + " body words .");
        return out;
    };
    const auto sizes = [](const std::vector<Fragment>& fs) {
        std::vector<std::size_t> out;
        for (const Fragment& f : fs) out.push_back(f.sentences.size());
        return out;
    };

    CHECK(sizes(make_fragments(sentences(25), "a", "d")) ==
          std::vector<std::size_t>{10, 10, 5});
    CHECK(sizes(make_fragments(sentences(10), "a", "d")) == std::vector<std::size_t>{10});
    CHECK(sizes(make_fragments(sentences(12), "a", "d")) == std::vector<std::size_t>{12});
    CHECK(sizes(make_fragments(sentences(27), "a", "d")) ==
          std::vector<std::size_t>{10, 10, 7});
    CHECK(sizes(make_fragments(sentences(3), "a", "d")) == std::vector<std::size_t>{3});

    SUBCASE("windows cover every sentence in order") {
        SplitMix64 rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 1 + rng.below(60);
            const auto input = sentences(n);
            const auto fragments = make_fragments(input, "a", "d");
            std::vector<std::string> joined;
            for (const Fragment& f : fragments)
                joined.insert(joined.end(), f.sentences.begin(), f.sentences.end());
            REQUIRE(joined == input);
            for (std::size_t i = 0; i < fragments.size(); ++i)
                REQUIRE(fragments[i].ordinal == i);
        }
    }
}

TEST_CASE("stratified_split apportions 81/9/10 per author") {
    const auto corpus = [](const std::vector<std::pair<std::string, std::size_t>>& spec) {
        std::vector<Fragment> out;
        for (const auto& [author, count] : spec)
            for (std::size_t i = 0; i < count; ++i) {
                Fragment f;
                f.author = author;
                f.document = author + "_doc";
                f.ordinal = i;
                out.push_back(std::move(f));
            }
        return out;
    };

    SUBCASE("single author of 100") {
        const SplitPlan plan = stratified_split(corpus({{"a", 100}}), 7);
        CHECK(plan.train.size() == 81);
        CHECK(plan.validation.size() == 9);
        CHECK(plan.test.size() == 10);
    }
    SUBCASE("two authors 60/40 put 6 and 4 in test") {
        const auto fragments = corpus({{"a", 60}, {"b", 40}});
        const SplitPlan plan = stratified_split(fragments, 7);
        std::size_t a_test = 0, b_test = 0;
        for (std::size_t i : plan.test)
            (fragments[i].author == "a" ? a_test : b_test) += 1;
        CHECK(a_test == 6);
        CHECK(b_test == 4);
    }
    SUBCASE("same seed reproduces the plan, different seeds move fragments") {
        const auto fragments = corpus({{"a", 30}, {"b", 25}, {"c", 41}});
        const SplitPlan p1 = stratified_split(fragments, 99);
        const SplitPlan p2 = stratified_split(fragments, 99);
        CHECK(p1.train == p2.train);
        CHECK(p1.validation == p2.validation);
        CHECK(p1.test == p2.test);
        CHECK(p1.hash() == p2.hash());
        const SplitPlan p3 = stratified_split(fragments, 100);
        CHECK(p3.hash() != p1.hash());
    }
    SUBCASE("partitions are disjoint and cover everything") {
        SplitMix64 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<std::pair<std::string, std::size_t>> spec;
            const std::size_t n_authors = 1 + rng.below(6);
            for (std::size_t a = 0; a < n_authors; ++a)
                spec.emplace_back("auth" + std::to_string(a), 3 + rng.below(80));
            const auto fragments = corpus(spec);
            const SplitPlan plan = stratified_split(fragments, rng.next());

            std::set<std::size_t> all;
            for (const auto* part : {&plan.train, &plan.validation, &plan.test})
                for (std::size_t i : *part) REQUIRE(all.insert(i).second);
            REQUIRE(all.size() == fragments.size());

            // per-author test share within one fragment of 10%
            for (const auto& [author, count] : spec) {
                std::size_t in_test = 0;
                for (std::size_t i : plan.test)
                    if (fragments[i].author == author) ++in_test;
                const double expected = 0.10 * static_cast<double>(count);
                REQUIRE(std::abs(static_cast<double>(in_test) - expected) <= 1.0);
            }
        }
    }
    SUBCASE("authors need at least three fragments") {
        CHECK_THROWS_AS(stratified_split(corpus({{"a", 2}, {"b", 10}}), 1),
                        StratificationError);
    }
}

TEST_CASE("load_corpus reads Author_Title files") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "stilus_corpus_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream a(dir / "Cicero_Oratio.txt");
        for (int i = 0; i < 12; ++i)
            a << "Quo usque tandem abutere Catilina patientia nostra" << i << ".\n";
        std::ofstream b(dir / "Caesar_Bellum.txt");
        for (int i = 0; i < 12; ++i)
            b << "Gallia est omnis divisa in partes tres" << i << ".\n";
    }
    const std::vector<Fragment> fragments = load_corpus(dir, 10);
    REQUIRE(fragments.size() == 2);
    CHECK(fragments[0].author == "Caesar");
    CHECK(fragments[0].document == "Caesar_Bellum");
    CHECK(fragments[0].sentences.size() == 12);
    CHECK(fragments[1].author == "Cicero");
    CHECK(fragments[1].sentences[0] ==
          "quo usque tandem abutere catilina patientia nostra .");
    fs::remove_all(dir);
}

TEST_SUITE_END();
