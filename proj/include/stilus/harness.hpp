#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stilus/classifier.hpp"
#include "stilus/corpus.hpp"
#include "stilus/distortion.hpp"
#include "stilus/evaluation.hpp"
#include "stilus/features.hpp"

namespace stilus {

inline constexpr const char* kToolkitVersion = "0.1.0";

// A feature setup: base features plus any combination of distorted views
// and the SQ or FAKE encoding. FAKE is a control and is only accepted on
// top of all four distorted views.
struct Setup {
    std::vector<ViewMethod> dvs;  // in DVMA, DVSA, DVEX, DVL2 order
    bool sq = false;
    bool fake = false;

    bool uses_selection() const { return sq || fake; }
    std::string name() const;
    // Same views without the SQ / FAKE addition; nullopt for plain setups.
    std::optional<Setup> baseline() const;

    static Setup parse(const std::string& name);
};

struct ExperimentConfig {
    std::filesystem::path corpus_dir;
    std::filesystem::path lexicon_path;  // empty: scan with an empty lexicon
    std::uint64_t seed = 0;
    std::vector<std::string> setups = default_setups();
    std::vector<double> c_grid = {0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0};
    std::vector<double> r_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 1.0};
    std::size_t fragment_size = 10;

    static std::vector<std::string> default_setups();
};

// Fragment access point. All feature construction reads fragments through
// at(), so a test probe can audit which fragments each phase touches.
class FragmentStore {
public:
    explicit FragmentStore(std::vector<Fragment> fragments);

    const Fragment& at(std::size_t i) const;
    std::size_t size() const { return fragments_.size(); }

    const std::vector<std::string>& authors() const { return authors_; }
    std::vector<std::string> labels_for(const std::vector<std::size_t>& indices) const;

    void set_probe(std::function<void(std::size_t)> probe) { probe_ = std::move(probe); }

private:
    std::vector<Fragment> fragments_;
    std::vector<std::string> authors_;
    std::function<void(std::size_t)> probe_;
};

struct GridPoint {
    double c = 0.0;
    std::optional<double> r;
    double validation_macro_f1 = 0.0;
    bool failed = false;
    std::string error;
};

struct SetupResult {
    std::string setup;
    std::vector<GridPoint> grid;
    double chosen_c = 0.0;
    std::optional<double> chosen_r;
    F1Scores test_scores;
    std::vector<std::string> test_predictions;  // aligned with the split's test set
    std::vector<bool> test_correct;
    std::size_t feature_columns = 0;
};

struct ReportRow {
    SetupResult result;
    std::optional<std::string> baseline;  // paired setup without SQ / FAKE
    std::optional<double> delta_macro_pct;
    std::optional<double> delta_micro_pct;
    std::optional<McNemarResult> mcnemar_vs_baseline;
};

struct ExperimentReport {
    std::string version = kToolkitVersion;
    std::uint64_t seed = 0;
    std::string corpus;
    std::uint64_t split_hash = 0;
    std::size_t fragments = 0;
    std::size_t train_size = 0, validation_size = 0, test_size = 0;
    std::vector<std::string> authors;
    std::vector<ReportRow> rows;
};

// Test hook: fired immediately before the final refit on train+validation,
// i.e. before any test fragment may be read.
struct RunObserver {
    std::function<void()> on_final_phase;
};

// Owns the corpus, lexicon, fake dictionary, split plan and per-fragment
// encoding caches of one experiment run.
class Experiment {
public:
    explicit Experiment(ExperimentConfig config);
    Experiment(ExperimentConfig config, std::vector<Fragment> fragments);
    ~Experiment();

    Experiment(const Experiment&) = delete;
    Experiment& operator=(const Experiment&) = delete;

    SetupResult run_setup(const Setup& setup, const RunObserver* observer = nullptr);
    ExperimentReport run();

    const SplitPlan& split() const;
    FragmentStore& store();
    const ExperimentConfig& config() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

std::string report_to_json(const ExperimentReport& report);
std::string report_to_markdown(const ExperimentReport& report);

}  // namespace stilus
