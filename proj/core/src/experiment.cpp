#include "strokelab/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/metrics.hpp"
#include "strokelab/neural.hpp"
#include "strokelab/rng.hpp"

namespace strokelab::lab {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// AUC convention of the published tables: rank statistic of the
/// thresholded predictions, i.e. balanced accuracy.
double label_auc(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    std::vector<double> scores(y_pred.begin(), y_pred.end());
    return metrics::roc_auc(y_true, scores);
}

struct PreparedSplit {
    Dataset train;
    Dataset test;
};

PreparedSplit split_and_standardize(const Dataset& ds, double test_fraction,
                                    std::uint64_t seed) {
    auto [train, test] = ingest::split(ds, test_fraction, seed);
    auto [train_std, others] = ingest::standardize(train, {test});
    return {std::move(train_std), std::move(others.front())};
}

std::string params_string(const shallow::ClassifierSpec& spec) {
    std::ostringstream out;
    switch (spec.kind) {
        case shallow::ClassifierKind::Logistic:
            out << (spec.penalty == shallow::Penalty::L1 ? "l1" : "l2") << ", C=" << spec.C;
            break;
        case shallow::ClassifierKind::LinearSGD:
            out << "hinge, l2, step=" << spec.learning_rate << ", epochs=" << spec.epochs;
            break;
        case shallow::ClassifierKind::DecisionTree:
            out << (spec.criterion == shallow::SplitCriterion::Entropy ? "entropy" : "gini")
                << ", max_depth=" << spec.max_depth;
            break;
        case shallow::ClassifierKind::AdaBoost:
            out << "learning_rate=" << spec.boost_learning_rate
                << ", n_estimators=" << spec.n_estimators;
            break;
        case shallow::ClassifierKind::GaussianNB:
            out << "default";
            break;
        case shallow::ClassifierKind::QDA:
            out << "reg_param=" << spec.reg_param << ", tol=" << spec.tol;
            break;
        case shallow::ClassifierKind::MLP:
            out << "hidden=" << spec.hidden_units << ", epochs=" << spec.epochs;
            break;
        case shallow::ClassifierKind::KNN:
            out << "leaf_size=" << spec.leaf_size << ", n_neighbors=" << spec.n_neighbors
                << ", p=" << spec.minkowski_p;
            break;
        case shallow::ClassifierKind::GradientBoosting:
            out << "n_estimators=" << spec.n_estimators;
            break;
    }
    return out.str();
}

ReportRow evaluate_shallow(const shallow::ClassifierModel& model, const Dataset& test,
                           double threshold) {
    ReportRow row;
    const auto labels = model.label(test.X, threshold);
    const auto report = metrics::compute_metrics(test.y, labels);
    row.f1 = report.f1;
    row.accuracy = report.accuracy;
    row.auc = label_auc(test.y, labels);
    return row;
}

bool is_neural(Technique t) {
    return t == Technique::Dnn || t == Technique::DnnFocal || t == Technique::SmoteDnnFocal ||
           t == Technique::PcakmeansDnnFocal;
}

bool uses_smote(Technique t) {
    return t == Technique::Smote || t == Technique::SmoteVoting ||
           t == Technique::SmoteDnnFocal;
}

bool uses_voting(Technique t) {
    return t == Technique::Voting || t == Technique::SmoteVoting;
}

}  // namespace

std::string technique_name(Technique t) {
    switch (t) {
        case Technique::Baseline: return "baseline";
        case Technique::Smote: return "smote";
        case Technique::Voting: return "voting";
        case Technique::SmoteVoting: return "smote_voting";
        case Technique::Dnn: return "dnn";
        case Technique::DnnFocal: return "dnn_focal";
        case Technique::SmoteDnnFocal: return "smote_dnn_focal";
        case Technique::PcakmeansDnnFocal: return "pcakmeans_dnn_focal";
    }
    return "?";
}

Technique technique_from_name(const std::string& name) {
    for (Technique t : {Technique::Baseline, Technique::Smote, Technique::Voting,
                        Technique::SmoteVoting, Technique::Dnn, Technique::DnnFocal,
                        Technique::SmoteDnnFocal, Technique::PcakmeansDnnFocal}) {
        if (technique_name(t) == name) {
            return t;
        }
    }
    throw std::invalid_argument("unknown technique: " + name);
}

void ExperimentConfig::validate() const {
    if (input_path.empty()) {
        throw std::invalid_argument("config: input path is required");
    }
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("config: test_fraction must be in (0,1)");
    }
    if (seeds.empty()) {
        throw std::invalid_argument("config: at least one seed is required");
    }
    if (is_neural(technique) && epochs.empty()) {
        throw std::invalid_argument("config: neural techniques need a nonempty epochs list");
    }
    if (gamma < 0.0) {
        throw std::invalid_argument("config: gamma must be >= 0");
    }
}

Dataset prepare_dataset(const std::string& input_path, ingest::ImputationStrategy imputation,
                        bool onehot_encoding) {
    ingest::CsvOptions options;
    options.required_columns = ingest::stroke_schema();
    const ingest::RawTable raw = ingest::load_csv(input_path, options);
    const ingest::RawTable cleaned = ingest::clean(raw, ingest::CleaningRules{});

    ingest::ImputationSpec imp;
    imp.strategy = imputation;
    imp.predictor_encoding = ingest::EncodingSpec::stroke_default(onehot_encoding);
    const ingest::RawTable imputed = ingest::impute(cleaned, imp);

    return ingest::encode(imputed, ingest::EncodingSpec::stroke_default(onehot_encoding));
}

namespace {

std::vector<ReportRow> run_shallow_seed(const ExperimentConfig& cfg, const Dataset& encoded,
                                        std::uint64_t seed) {
    std::vector<ReportRow> rows;
    PreparedSplit prepared = split_and_standardize(encoded, cfg.test_fraction, seed);

    Dataset train = prepared.train;
    if (uses_smote(cfg.technique)) {
        resample::SmoteConfig smote_cfg = cfg.smote_cfg;
        smote_cfg.seed = seed;
        train = resample::smote(train, smote_cfg);
    }

    std::vector<shallow::ClassifierSpec> roster =
        cfg.classifiers.empty() ? shallow::ClassifierSpec::tuned_roster(seed) : cfg.classifiers;
    for (auto& spec : roster) {
        spec.seed = seed;
    }

    if (uses_voting(cfg.technique)) {
        const auto start = Clock::now();
        ReportRow row;
        row.technique = technique_name(cfg.technique);
        row.classifier = "Weighted Voting";
        row.params = "weights ~ validation F1";
        row.seed = seed;
        try {
            const auto ensemble = shallow::fit_weighted_voting(
                roster, train,
                shallow::VotingWeighting::metric_proportional(shallow::VotingMetric::F1), seed);
            const ReportRow eval =
                evaluate_shallow(*ensemble, prepared.test, cfg.shallow_threshold);
            row.f1 = eval.f1;
            row.auc = eval.auc;
            row.accuracy = eval.accuracy;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        row.runtime_seconds = seconds_since(start);
        rows.push_back(std::move(row));
        return rows;
    }

    for (const auto& spec : roster) {
        const auto start = Clock::now();
        ReportRow row;
        row.technique = technique_name(cfg.technique);
        row.classifier = spec.name();
        row.params = params_string(spec);
        row.seed = seed;
        try {
            const auto model = shallow::fit_classifier(spec, train);
            const ReportRow eval = evaluate_shallow(*model, prepared.test, cfg.shallow_threshold);
            row.f1 = eval.f1;
            row.auc = eval.auc;
            row.accuracy = eval.accuracy;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        row.runtime_seconds = seconds_since(start);
        rows.push_back(std::move(row));
    }
    return rows;
}

neural::TrainOptions dnn_options(const ExperimentConfig& cfg, std::uint64_t seed,
                                 std::size_t max_epochs) {
    neural::TrainOptions options;
    options.epochs = max_epochs;
    options.batch_size = cfg.dnn_batch_size;
    options.step = cfg.dnn_step;
    options.seed = seed;
    options.loss = cfg.technique == Technique::Dnn ? neural::LossSpec::cross_entropy()
                                                   : neural::LossSpec::focal(cfg.gamma);
    return options;
}

std::string dnn_model_name(Technique t) {
    switch (t) {
        case Technique::Dnn: return "DNN";
        case Technique::DnnFocal: return "DNN + Focal Loss";
        case Technique::SmoteDnnFocal: return "DNN + SMOTE + Focal Loss";
        case Technique::PcakmeansDnnFocal: return "PCA-Kmeans + DNN + Focal Loss";
        default: return "?";
    }
}

std::vector<ReportRow> rows_from_history(const ExperimentConfig& cfg, std::uint64_t seed,
                                         const neural::TrainingHistory& history,
                                         const std::string& caveat, double runtime) {
    std::vector<ReportRow> rows;
    for (int epoch : cfg.epochs) {
        ReportRow row;
        row.technique = technique_name(cfg.technique);
        row.classifier = dnn_model_name(cfg.technique);
        std::ostringstream params;
        params << "hidden=64,128,256, step=" << cfg.dnn_step << ", gamma="
               << (cfg.technique == Technique::Dnn ? 0.0 : cfg.gamma);
        row.params = params.str();
        row.epoch = epoch;
        row.seed = seed;
        row.caveat = caveat;
        row.runtime_seconds = runtime;
        const auto idx = static_cast<std::size_t>(epoch) - 1;
        if (idx < history.eval_f1.size()) {
            row.f1 = history.eval_f1[idx];
            row.auc = history.eval_auc[idx];
            row.accuracy = history.eval_accuracy[idx];
        } else {
            row.error = "epoch checkpoint beyond trained epochs";
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ReportRow> run_dnn_seed(const ExperimentConfig& cfg, const Dataset& encoded,
                                    std::uint64_t seed) {
    const auto start = Clock::now();
    PreparedSplit prepared = split_and_standardize(encoded, cfg.test_fraction, seed);

    Dataset train = prepared.train;
    if (uses_smote(cfg.technique)) {
        resample::SmoteConfig smote_cfg = cfg.smote_cfg;
        smote_cfg.seed = seed;
        train = resample::smote(train, smote_cfg);
    }

    const std::size_t max_epochs = static_cast<std::size_t>(
        *std::max_element(cfg.epochs.begin(), cfg.epochs.end()));
    auto params = neural::init_network(train.n_features(), neural::kDefaultHidden, seed);
    const auto [trained, history] =
        neural::train(std::move(params), train, dnn_options(cfg, seed, max_epochs),
                      &prepared.test);
    return rows_from_history(cfg, seed, history, "", seconds_since(start));
}

std::vector<ReportRow> run_pcakmeans_seed(const ExperimentConfig& cfg, const Dataset& encoded,
                                          std::uint64_t seed) {
    const auto start = Clock::now();
    const std::size_t max_epochs = static_cast<std::size_t>(
        *std::max_element(cfg.epochs.begin(), cfg.epochs.end()));

    resample::ClusterUndersampleConfig cluster_cfg = cfg.cluster_cfg;
    cluster_cfg.seed = seed;

    if (cfg.pcakmeans_leakage_free) {
        PreparedSplit prepared = split_and_standardize(encoded, cfg.test_fraction, seed);
        const auto result = resample::cluster_undersample(prepared.train, cluster_cfg);
        auto params = neural::init_network(encoded.n_features(), neural::kDefaultHidden, seed);
        const auto [trained, history] = neural::train_cluster_batches(
            std::move(params), result.batches, dnn_options(cfg, seed, max_epochs),
            &prepared.test);
        return rows_from_history(cfg, seed, history, "leakage-free split (train-only resampling)",
                                 seconds_since(start));
    }

    // Published protocol: resample the whole standardized dataset, then
    // split the combined set. Replicated minority rows can straddle the
    // split, hence the caveat flag on every row.
    auto [full_std, others] = ingest::standardize(encoded, {});
    const auto result = resample::cluster_undersample(full_std, cluster_cfg);

    const auto [train_pos, test_pos] =
        ingest::split_indices(result.combined.y, cfg.test_fraction, seed);
    std::vector<char> in_test(result.combined.n_rows(), 0);
    for (std::size_t p : test_pos) {
        in_test[p] = 1;
    }
    const Dataset holdout = result.combined.take_rows(test_pos);

    std::vector<resample::ClusterBatch> train_batches;
    std::size_t offset = 0;
    for (const auto& batch : result.batches) {
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < batch.data.n_rows(); ++i) {
            if (!in_test[offset + i]) {
                kept.push_back(i);
            }
        }
        offset += batch.data.n_rows();
        resample::ClusterBatch reduced;
        reduced.cluster_index = batch.cluster_index;
        reduced.ks = batch.ks;
        reduced.data = batch.data.take_rows(kept);
        for (std::size_t i : kept) {
            reduced.provenance.push_back(batch.provenance[i]);
        }
        if (reduced.data.n_rows() > 0) {
            train_batches.push_back(std::move(reduced));
        }
    }

    auto params = neural::init_network(encoded.n_features(), neural::kDefaultHidden, seed);
    const auto [trained, history] = neural::train_cluster_batches(
        std::move(params), train_batches, dnn_options(cfg, seed, max_epochs), &holdout);
    return rows_from_history(cfg, seed, history,
                             "split after resampling (published protocol); "
                             "replicated minority rows may straddle the split",
                             seconds_since(start));
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    ExperimentReport report;
    report.environment = "strokelab 0.1.0";
    {
        const auto now = std::chrono::system_clock::now();
        const std::time_t t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        report.timestamp = buf;
    }
    {
        nlohmann::json echo;
        echo["input"] = cfg.input_path;
        echo["imputation"] =
            cfg.imputation == ingest::ImputationStrategy::Mean ? "mean" : "regression";
        echo["encoding"] = cfg.onehot_encoding ? "onehot" : "label";
        echo["technique"] = technique_name(cfg.technique);
        echo["epochs"] = cfg.epochs;
        echo["gamma"] = cfg.gamma;
        echo["seeds"] = cfg.seeds;
        echo["test_fraction"] = cfg.test_fraction;
        echo["pcakmeans_leakage_free"] = cfg.pcakmeans_leakage_free;
        report.config_echo = echo.dump();
    }

    Dataset encoded;
    try {
        encoded = prepare_dataset(cfg.input_path, cfg.imputation, cfg.onehot_encoding);
    } catch (const std::exception& e) {
        ReportRow row;
        row.technique = technique_name(cfg.technique);
        row.classifier = "(pipeline)";
        row.error = e.what();
        report.rows.push_back(std::move(row));
        return report;
    }

    const auto run_seed = [&](std::uint64_t seed) -> std::vector<ReportRow> {
        try {
            if (!is_neural(cfg.technique)) {
                return run_shallow_seed(cfg, encoded, seed);
            }
            if (cfg.technique == Technique::PcakmeansDnnFocal) {
                return run_pcakmeans_seed(cfg, encoded, seed);
            }
            return run_dnn_seed(cfg, encoded, seed);
        } catch (const std::exception& e) {
            ReportRow row;
            row.technique = technique_name(cfg.technique);
            row.classifier = is_neural(cfg.technique) ? dnn_model_name(cfg.technique) : "(seed)";
            row.seed = seed;
            row.error = e.what();
            return {row};
        }
    };

    if (is_neural(cfg.technique) && cfg.seeds.size() > 1) {
        // Seeds are independent; run them concurrently and splice the rows
        // back in declaration order.
        std::vector<std::future<std::vector<ReportRow>>> futures;
        futures.reserve(cfg.seeds.size());
        for (std::uint64_t seed : cfg.seeds) {
            futures.push_back(std::async(std::launch::async, run_seed, seed));
        }
        for (auto& f : futures) {
            const auto rows = f.get();
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
    } else {
        for (std::uint64_t seed : cfg.seeds) {
            const auto rows = run_seed(seed);
            report.rows.insert(report.rows.end(), rows.begin(), rows.end());
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Grid search
// ---------------------------------------------------------------------------

GridSearchResult grid_search_cv(
    const shallow::ClassifierSpec& spec_template,
    const std::vector<std::pair<std::string, std::vector<double>>>& grid, const Dataset& train,
    int folds, CvMetric metric, std::uint64_t seed) {
    if (folds < 2) {
        throw std::invalid_argument("grid_search_cv: folds must be >= 2");
    }
    for (const auto& [name, values] : grid) {
        if (values.empty()) {
            throw std::invalid_argument("grid_search_cv: empty value list for '" + name + "'");
        }
    }

    // Stratified fold assignment: shuffle each class, deal round-robin.
    std::vector<int> fold_of(train.n_rows(), 0);
    Rng rng = make_rng(seed);
    for (int cls : {0, 1}) {
        auto idx = train.indices_of_label(cls);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            fold_of[idx[i]] = static_cast<int>(i % static_cast<std::size_t>(folds));
        }
    }

    // Cartesian product in declaration order, first parameter slowest.
    std::size_t n_cells = 1;
    for (const auto& [name, values] : grid) {
        n_cells *= values.size();
    }

    GridSearchResult result;
    result.best = spec_template;
    double best_score = -1.0;

    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        GridCell entry;
        shallow::ClassifierSpec spec = spec_template;
        std::size_t rest = cell;
        std::size_t radix = n_cells;
        for (const auto& [name, values] : grid) {
            radix /= values.size();
            const std::size_t pick = rest / radix;
            rest %= radix;
            spec.set_param(name, values[pick]);
            entry.params[name] = values[pick];
        }
        spec.validate();

        for (int f = 0; f < folds; ++f) {
            std::vector<std::size_t> fit_idx;
            std::vector<std::size_t> val_idx;
            for (std::size_t i = 0; i < train.n_rows(); ++i) {
                (fold_of[i] == f ? val_idx : fit_idx).push_back(i);
            }
            const Dataset fit_part = train.take_rows(fit_idx);
            const Dataset val_part = train.take_rows(val_idx);
            if (fit_part.count_label(0) == 0 || fit_part.count_label(1) == 0 ||
                val_part.count_label(0) == 0 || val_part.count_label(1) == 0) {
                throw std::invalid_argument("grid_search_cv: a fold lacks a class");
            }
            const auto model = shallow::fit_classifier(spec, fit_part);
            double score = 0.0;
            if (metric == CvMetric::F1) {
                const auto labels = model->label(val_part.X, 0.5);
                score = metrics::compute_metrics(val_part.y, labels).f1;
            } else {
                score = metrics::roc_auc(val_part.y, model->score(val_part.X));
            }
            entry.fold_scores.push_back(score);
        }
        entry.mean_score =
            std::accumulate(entry.fold_scores.begin(), entry.fold_scores.end(), 0.0) /
            static_cast<double>(entry.fold_scores.size());

        if (entry.mean_score > best_score) {
            best_score = entry.mean_score;
            result.best = spec;
            result.best_index = result.cells.size();
        }
        result.cells.push_back(std::move(entry));
    }
    return result;
}

std::vector<std::pair<std::string, std::vector<double>>> default_grid(
    shallow::ClassifierKind kind) {
    using K = shallow::ClassifierKind;
    switch (kind) {
        case K::Logistic: return {{"C", {0.05, 0.2336, 1.0}}};
        case K::LinearSGD: return {{"learning_rate", {1e-4, 1e-3, 1e-2}}};
        case K::DecisionTree: return {{"max_depth", {2, 3, 4}}};
        case K::AdaBoost:
            return {{"learning_rate", {0.25, 0.5, 1.0}}, {"n_estimators", {100, 200, 400}}};
        case K::GaussianNB: return {};
        case K::QDA: return {{"reg_param", {0.05, 0.1, 0.2}}};
        case K::MLP: return {{"epochs", {100, 200, 400}}};
        case K::KNN: return {{"n_neighbors", {9, 11, 13}}};
        case K::GradientBoosting: return {{"n_estimators", {40, 80, 160}}};
    }
    return {};
}

}  // namespace strokelab::lab
