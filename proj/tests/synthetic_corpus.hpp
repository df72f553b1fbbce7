#pragma once

#include <cstdint>
#include <filesystem>

namespace stilus::testsupport {

struct SyntheticSpec {
    std::uint64_t seed = 1;
    std::size_t docs_per_author = 5;
    std::size_t sentences_per_doc = 130;
    std::size_t pairs = 40;  // shared vocabulary size, in word pairs
};

struct SyntheticCorpus {
    std::filesystem::path corpus_dir;
    std::filesystem::path lexicon_path;
};

// Writes a three-author corpus with a shared vocabulary but distinct
// syllable-quantity profiles. The vocabulary consists of word pairs that
// agree in length, first syllable and final syllable; one member carries
// all-long lexicon marks, the other scans all short. Authors differ only
// in how often they pick the long member (0.88 / 0.12 / 0.50), so base
// features and distorted views are uninformative by construction while the
// quantity encoding separates the authors.
SyntheticCorpus write_synthetic_corpus(const std::filesystem::path& dir,
                                       const SyntheticSpec& spec = {});

}  // namespace stilus::testsupport
