#include "stilus/harness.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "stilus/errors.hpp"
#include "stilus/prosody.hpp"

namespace stilus {

namespace {

constexpr ViewMethod kDvOrder[4] = {ViewMethod::DVMA, ViewMethod::DVSA, ViewMethod::DVEX,
                                    ViewMethod::DVL2};

std::size_t dv_slot(ViewMethod m) {
    switch (m) {
        case ViewMethod::DVMA: return 0;
        case ViewMethod::DVSA: return 1;
        case ViewMethod::DVEX: return 2;
        case ViewMethod::DVL2: return 3;
        default: throw Error("not a distortion method");
    }
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

}  // namespace

// --- Setup -------------------------------------------------------------------

std::string Setup::name() const {
    std::string n = "BFs";
    if (dvs.size() == 4) {
        n += "+ALLDV";
    } else {
        for (ViewMethod m : dvs) n += std::string("+") + view_method_name(m);
    }
    if (sq) n += "+SQ";
    if (fake) n += "+FAKE";
    return n;
}

std::optional<Setup> Setup::baseline() const {
    if (!sq && !fake) return std::nullopt;
    Setup b = *this;
    b.sq = false;
    b.fake = false;
    return b;
}

Setup Setup::parse(const std::string& name) {
    Setup setup;
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(name);
    while (std::getline(in, part, '+')) parts.push_back(part);
    if (parts.empty() || parts.front() != "BFs")
        throw Error("setup '" + name + "' must start with BFs");

    bool seen[4] = {false, false, false, false};
    for (std::size_t i = 1; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (p == "SQ") {
            if (setup.sq) throw Error("setup '" + name + "' repeats SQ");
            setup.sq = true;
        } else if (p == "FAKE") {
            if (setup.fake) throw Error("setup '" + name + "' repeats FAKE");
            setup.fake = true;
        } else if (p == "ALLDV") {
            for (bool& s : seen) s = true;
        } else {
            seen[dv_slot(view_method_from_name(p))] = true;
        }
    }
    for (std::size_t s = 0; s < 4; ++s)
        if (seen[s]) setup.dvs.push_back(kDvOrder[s]);

    if (setup.sq && setup.fake)
        throw Error("setup '" + name + "' combines SQ and FAKE");
    if (setup.fake && setup.dvs.size() != 4)
        throw Error("the FAKE control is only run alongside ALLDV");
    return setup;
}

std::vector<std::string> ExperimentConfig::default_setups() {
    return {"BFs",           "BFs+SQ",      "BFs+DVMA", "BFs+DVMA+SQ",
            "BFs+DVSA",      "BFs+DVSA+SQ", "BFs+DVEX", "BFs+DVEX+SQ",
            "BFs+DVL2",      "BFs+DVL2+SQ", "BFs+ALLDV", "BFs+ALLDV+SQ",
            "BFs+ALLDV+FAKE"};
}

// --- FragmentStore -----------------------------------------------------------

FragmentStore::FragmentStore(std::vector<Fragment> fragments)
    : fragments_(std::move(fragments)) {
    for (const Fragment& f : fragments_) authors_.push_back(f.author);
    std::sort(authors_.begin(), authors_.end());
    authors_.erase(std::unique(authors_.begin(), authors_.end()), authors_.end());
}

const Fragment& FragmentStore::at(std::size_t i) const {
    if (probe_) probe_(i);
    return fragments_.at(i);
}

std::vector<std::string> FragmentStore::labels_for(
    const std::vector<std::size_t>& indices) const {
    std::vector<std::string> labels;
    labels.reserve(indices.size());
    for (std::size_t i : indices) labels.push_back(fragments_.at(i).author);
    return labels;
}

// --- Experiment --------------------------------------------------------------

struct Experiment::Impl {
    ExperimentConfig config;
    SplitPlan split;
    FragmentStore store;
    MacronLexicon lexicon;
    FakeDictionary fake_dict;

    // lazy per-fragment encodings; slots 0..3 are the DV methods
    std::vector<std::optional<EncodedView>> dv_cache[4];
    std::vector<std::optional<EncodedView>> sq_cache;
    std::vector<std::optional<EncodedView>> fake_cache;

    Impl(ExperimentConfig cfg, std::vector<Fragment> fragments)
        : config(std::move(cfg)),
          split(stratified_split(fragments, config.seed)),
          store(std::move(fragments)),
          fake_dict(config.seed ^ 0xfa4ed1c7ULL) {
        if (!config.lexicon_path.empty()) lexicon = MacronLexicon::load(config.lexicon_path);
        if (split.validation.empty() || split.test.empty())
            throw StratificationError(
                "corpus is too small for the 81/9/10 split: validation holds " +
                std::to_string(split.validation.size()) + " and test " +
                std::to_string(split.test.size()) + " fragments");
        for (auto& cache : dv_cache) cache.resize(store.size());
        sq_cache.resize(store.size());
        fake_cache.resize(store.size());
    }

    const EncodedView& dv_view(std::size_t i, ViewMethod m) {
        auto& slot = dv_cache[dv_slot(m)][i];
        if (!slot)
            slot = distort(store.at(i).text(), m, FunctionWordList::latin());
        return *slot;
    }

    const EncodedView& sq_view(std::size_t i) {
        auto& slot = sq_cache[i];
        if (!slot) {
            try {
                slot = sq_encode(store.at(i).sentences, lexicon);
            } catch (const EmptyEncodingError&) {
                slot = EncodedView{ViewMethod::SQ, "", {}};
            }
        }
        return *slot;
    }

    const EncodedView& fake_view(std::size_t i) {
        auto& slot = fake_cache[i];
        if (!slot) slot = fake_encode(store.at(i).text(), fake_dict);
        return *slot;
    }

    std::vector<EncodedView> views_for(const std::vector<std::size_t>& indices,
                                       ViewMethod m) {
        std::vector<EncodedView> views;
        views.reserve(indices.size());
        for (std::size_t i : indices) {
            if (m == ViewMethod::SQ) views.push_back(sq_view(i));
            else if (m == ViewMethod::FAKE) views.push_back(fake_view(i));
            else views.push_back(dv_view(i, m));
        }
        return views;
    }

    FeatureMatrix bfs_matrix(const std::vector<std::size_t>& indices) {
        std::vector<const Fragment*> fragments;
        fragments.reserve(indices.size());
        for (std::size_t i : indices) fragments.push_back(&store.at(i));
        return base_feature_matrix(fragments);
    }

    struct PhaseFeatures {
        FeatureMatrix fit;
        FeatureMatrix eval;
    };

    // Fits every block of the setup on `fit_idx` only and transforms both
    // index sets; blocks are concatenated BFs first, then the distorted
    // views in declared order, then SQ / FAKE.
    PhaseFeatures build_features(const Setup& setup,
                                 const std::vector<std::size_t>& fit_idx,
                                 const std::vector<std::size_t>& eval_idx,
                                 std::optional<double> r) {
        std::vector<FeatureMatrix> fit_blocks{bfs_matrix(fit_idx)};
        std::vector<FeatureMatrix> eval_blocks{bfs_matrix(eval_idx)};

        for (ViewMethod m : setup.dvs) {
            const std::vector<EncodedView> fit_views = views_for(fit_idx, m);
            const FeatureSpace space = fit_space(fit_views, NGramSpec::dv());
            fit_blocks.push_back(transform(fit_views, space));
            eval_blocks.push_back(transform(views_for(eval_idx, m), space));
        }

        if (setup.sq || setup.fake) {
            const ViewMethod m = setup.sq ? ViewMethod::SQ : ViewMethod::FAKE;
            const std::vector<EncodedView> fit_views = views_for(fit_idx, m);
            const FeatureSpace space =
                fit_space(fit_views, NGramSpec::sq(), store.labels_for(fit_idx), r);
            fit_blocks.push_back(transform(fit_views, space));
            eval_blocks.push_back(transform(views_for(eval_idx, m), space));
        }

        return {assemble(fit_blocks), assemble(eval_blocks)};
    }
};

Experiment::Experiment(ExperimentConfig config)
    : impl_(std::make_unique<Impl>(
          config, load_corpus(config.corpus_dir, config.fragment_size))) {}

Experiment::Experiment(ExperimentConfig config, std::vector<Fragment> fragments)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(fragments))) {}

Experiment::~Experiment() = default;

const SplitPlan& Experiment::split() const { return impl_->split; }
FragmentStore& Experiment::store() { return impl_->store; }
const ExperimentConfig& Experiment::config() const { return impl_->config; }

SetupResult Experiment::run_setup(const Setup& setup, const RunObserver* observer) {
    Impl& ctx = *impl_;
    SetupResult result;
    result.setup = setup.name();

    const std::vector<std::string> train_labels = ctx.store.labels_for(ctx.split.train);
    const std::vector<std::string> val_labels =
        ctx.store.labels_for(ctx.split.validation);
    const std::vector<std::string>& authors = ctx.store.authors();

    std::vector<std::optional<double>> r_options;
    if (setup.uses_selection())
        for (double r : ctx.config.r_grid) r_options.emplace_back(r);
    else
        r_options.emplace_back(std::nullopt);

    bool have_best = false;
    double best_f1 = 0.0;

    for (const std::optional<double>& r : r_options) {
        std::optional<Impl::PhaseFeatures> feats;
        std::string build_error;
        try {
            feats = ctx.build_features(setup, ctx.split.train, ctx.split.validation, r);
        } catch (const Error& e) {
            build_error = e.what();
        }
        for (double c : ctx.config.c_grid) {
            GridPoint point;
            point.c = c;
            point.r = r;
            if (!feats) {
                point.failed = true;
                point.error = build_error;
                result.grid.push_back(std::move(point));
                continue;
            }
            try {
                const LinearModel model = train(feats->fit, train_labels, c);
                const std::vector<std::string> preds = predict(model, feats->eval);
                point.validation_macro_f1 = f1_scores(val_labels, preds, authors).macro;
            } catch (const Error& e) {
                point.failed = true;
                point.error = e.what();
                result.grid.push_back(std::move(point));
                continue;
            }
            const bool better =
                !have_best || point.validation_macro_f1 > best_f1 ||
                (point.validation_macro_f1 == best_f1 &&
                 (c < result.chosen_c ||
                  (c == result.chosen_c && r.value_or(0.0) < result.chosen_r.value_or(0.0))));
            if (better) {
                have_best = true;
                best_f1 = point.validation_macro_f1;
                result.chosen_c = c;
                result.chosen_r = r;
            }
            result.grid.push_back(std::move(point));
        }
    }
    if (!have_best)
        throw Error("every grid configuration failed for setup " + result.setup);

    if (observer && observer->on_final_phase) observer->on_final_phase();

    // refit on train + validation with the chosen configuration
    std::vector<std::size_t> final_fit = ctx.split.train;
    final_fit.insert(final_fit.end(), ctx.split.validation.begin(),
                     ctx.split.validation.end());
    const Impl::PhaseFeatures feats =
        ctx.build_features(setup, final_fit, ctx.split.test, result.chosen_r);
    const LinearModel model =
        train(feats.fit, ctx.store.labels_for(final_fit), result.chosen_c);
    result.test_predictions = predict(model, feats.eval);
    const std::vector<std::string> test_labels = ctx.store.labels_for(ctx.split.test);
    result.test_scores = f1_scores(test_labels, result.test_predictions, authors);
    result.test_correct.reserve(test_labels.size());
    for (std::size_t i = 0; i < test_labels.size(); ++i)
        result.test_correct.push_back(test_labels[i] == result.test_predictions[i]);
    result.feature_columns = feats.fit.cols();
    return result;
}

ExperimentReport Experiment::run() {
    Impl& ctx = *impl_;
    ExperimentReport report;
    report.seed = ctx.config.seed;
    report.corpus = ctx.config.corpus_dir.string();
    report.split_hash = ctx.split.hash();
    report.fragments = ctx.store.size();
    report.train_size = ctx.split.train.size();
    report.validation_size = ctx.split.validation.size();
    report.test_size = ctx.split.test.size();
    report.authors = ctx.store.authors();

    std::vector<Setup> setups;
    setups.reserve(ctx.config.setups.size());
    for (const std::string& name : ctx.config.setups) setups.push_back(Setup::parse(name));

    for (const Setup& setup : setups) {
        ReportRow row;
        row.result = run_setup(setup);
        report.rows.push_back(std::move(row));
    }

    for (ReportRow& row : report.rows) {
        Setup setup = Setup::parse(row.result.setup);
        const std::optional<Setup> base = setup.baseline();
        if (!base) continue;
        const std::string base_name = base->name();
        const auto it = std::find_if(
            report.rows.begin(), report.rows.end(),
            [&](const ReportRow& r) { return r.result.setup == base_name; });
        if (it == report.rows.end()) continue;
        row.baseline = base_name;
        row.delta_macro_pct =
            delta_percent(row.result.test_scores.macro, it->result.test_scores.macro);
        row.delta_micro_pct =
            delta_percent(row.result.test_scores.micro, it->result.test_scores.micro);
        row.mcnemar_vs_baseline =
            mcnemar(row.result.test_correct, it->result.test_correct);
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    Experiment experiment(config);
    return experiment.run();
}

// --- reporting ---------------------------------------------------------------

std::string report_to_json(const ExperimentReport& report) {
    using json = nlohmann::ordered_json;
    json j;
    j["toolkit_version"] = report.version;
    j["seed"] = report.seed;
    j["corpus"] = report.corpus;
    j["split"] = {{"hash", report.split_hash},
                  {"fragments", report.fragments},
                  {"train", report.train_size},
                  {"validation", report.validation_size},
                  {"test", report.test_size}};
    j["authors"] = report.authors;

    json rows = json::array();
    for (const ReportRow& row : report.rows) {
        json r;
        r["setup"] = row.result.setup;
        r["F1M"] = row.result.test_scores.macro;
        r["F1mu"] = row.result.test_scores.micro;
        if (row.delta_macro_pct) r["deltaM"] = round2(*row.delta_macro_pct);
        else r["deltaM"] = nullptr;
        if (row.delta_micro_pct) r["deltaMu"] = round2(*row.delta_micro_pct);
        else r["deltaMu"] = nullptr;
        if (row.mcnemar_vs_baseline) {
            const McNemarResult& m = *row.mcnemar_vs_baseline;
            r["mcnemar"] = {{"b", m.b},
                            {"c", m.c},
                            {"p", m.p},
                            {"exact", m.exact},
                            {"significant", m.significant}};
        } else {
            r["mcnemar"] = nullptr;
        }
        r["C"] = row.result.chosen_c;
        if (row.result.chosen_r) r["r"] = *row.result.chosen_r;
        else r["r"] = nullptr;
        if (row.baseline) r["baseline"] = *row.baseline;
        else r["baseline"] = nullptr;
        r["feature_columns"] = row.result.feature_columns;
        r["split_hash"] = report.split_hash;
        json grid = json::array();
        for (const GridPoint& g : row.result.grid) {
            json gp;
            gp["C"] = g.c;
            if (g.r) gp["r"] = *g.r;
            else gp["r"] = nullptr;
            gp["F1M_validation"] = g.validation_macro_f1;
            gp["failed"] = g.failed;
            if (g.failed) gp["error"] = g.error;
            grid.push_back(std::move(gp));
        }
        r["grid"] = std::move(grid);
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string report_to_markdown(const ExperimentReport& report) {
    std::ostringstream out;
    out << "| Setup | F1M | dM% | F1mu | dmu% | M |\n";
    out << "|---|---|---|---|---|---|\n";
    const auto fmt = [](double v, int digits) {
        std::ostringstream s;
        s.precision(digits);
        s << std::fixed << v;
        return s.str();
    };
    for (const ReportRow& row : report.rows) {
        out << "| " << row.result.setup << " | "
            << fmt(row.result.test_scores.macro, 3) << " | ";
        if (row.delta_macro_pct) {
            const double d = round2(*row.delta_macro_pct);
            out << (d >= 0 ? "+" : "") << fmt(d, 2);
        }
        out << " | " << fmt(row.result.test_scores.micro, 3) << " | ";
        if (row.delta_micro_pct) {
            const double d = round2(*row.delta_micro_pct);
            out << (d >= 0 ? "+" : "") << fmt(d, 2);
        }
        out << " | ";
        if (row.mcnemar_vs_baseline)
            out << (row.mcnemar_vs_baseline->significant ? "yes" : "no");
        out << " |\n";
    }
    return out.str();
}

}  // namespace stilus
