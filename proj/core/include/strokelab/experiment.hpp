#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/ingest.hpp"
#include "strokelab/resample.hpp"
#include "strokelab/shallow.hpp"

namespace strokelab::lab {

enum class Technique {
    Baseline,
    Smote,
    Voting,
    SmoteVoting,
    Dnn,
    DnnFocal,
    SmoteDnnFocal,
    PcakmeansDnnFocal,
};

std::string technique_name(Technique t);
Technique technique_from_name(const std::string& name);

struct ExperimentConfig {
    std::string input_path;
    ingest::ImputationStrategy imputation = ingest::ImputationStrategy::Regression;
    bool onehot_encoding = true;
    Technique technique = Technique::Baseline;
    /// Shallow techniques: which classifiers to run (empty = full tuned roster).
    std::vector<shallow::ClassifierSpec> classifiers;
    /// Neural techniques: evaluation checkpoints.
    std::vector<int> epochs = {50, 100, 200};
    double gamma = 2.0;
    std::vector<std::uint64_t> seeds = {7, 17, 42};
    double test_fraction = 0.2;
    double shallow_threshold = 0.5;
    double dnn_threshold = 0.25;
    std::string out_dir;

    resample::SmoteConfig smote_cfg;
    resample::ClusterUndersampleConfig cluster_cfg;
    double dnn_step = 1e-3;
    std::size_t dnn_batch_size = 32;
    /// Leakage-free alternative to the published pcakmeans protocol:
    /// resample the train partition only and keep the test set untouched.
    bool pcakmeans_leakage_free = false;

    void validate() const;
};

/// One (configuration, seed) evaluation. AUC follows the published tables:
/// it is the Mann-Whitney statistic of the thresholded predictions (which
/// equals balanced accuracy), not of the raw scores.
struct ReportRow {
    std::string technique;
    std::string classifier;  // classifier or model name ("DNN", ...)
    std::string params;
    int epoch = 0;  // 0 for shallow models
    std::uint64_t seed = 0;
    double f1 = 0.0;
    double auc = 0.0;
    double accuracy = 0.0;
    double runtime_seconds = 0.0;
    std::string caveat;  // methodological caveat flags
    std::string error;   // nonempty when this configuration failed
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    std::string config_echo;  // JSON of the requesting configuration
    std::string environment;  // library version
    std::string timestamp;

    std::string to_json() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// The cleaned/imputed/encoded dataset for one preprocessing axis, before
/// splitting and standardization.
Dataset prepare_dataset(const std::string& input_path, ingest::ImputationStrategy imputation,
                        bool onehot_encoding);

// ---------------------------------------------------------------------------
// Grid search cross-validation
// ---------------------------------------------------------------------------

struct GridCell {
    std::map<std::string, double> params;
    double mean_score = 0.0;
    std::vector<double> fold_scores;
};

struct GridSearchResult {
    shallow::ClassifierSpec best;
    std::size_t best_index = 0;
    std::vector<GridCell> cells;
};

enum class CvMetric { F1, Auc };

/// Stratified k-fold grid search. Cells are visited in declaration order
/// (Cartesian product, first parameter varies slowest); ties keep the
/// first cell. Throws when a fold lacks a class.
GridSearchResult grid_search_cv(const shallow::ClassifierSpec& spec_template,
                                const std::vector<std::pair<std::string, std::vector<double>>>& grid,
                                const Dataset& train, int folds = 5,
                                CvMetric metric = CvMetric::F1, std::uint64_t seed = 7);

/// The tuned value of the published table bracketed by one value per side.
std::vector<std::pair<std::string, std::vector<double>>> default_grid(
    shallow::ClassifierKind kind);

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

struct ReportFormats {
    bool json = true;
    bool markdown = true;
    bool csv = true;
};

/// Write report.json / report.md / report.csv into out_dir; returns the
/// paths written. The markdown mirrors the published tables' shape and
/// renders the out-of-scope XGB row as "n/a".
std::vector<std::string> emit_report(const ExperimentReport& report, const std::string& out_dir,
                                     const ReportFormats& formats = {});

ExperimentReport parse_report_json(const std::string& json_text);

/// Flat key=value config file mirroring the CLI flags; '#' starts a comment.
std::map<std::string, std::string> parse_config_file(const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

}  // namespace strokelab::lab
