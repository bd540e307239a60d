#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/table.hpp"

namespace strokelab::ingest {

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

enum class EncodingKind { Label, OneHot, Ordinal, Binary };

struct ColumnEncoding {
    EncodingKind kind = EncodingKind::Label;
    /// For Ordinal: the full value list in rank order (rank = index).
    std::vector<std::string> ordinal_order;
};

struct EncodingSpec {
    std::map<std::string, ColumnEncoding> columns;
    std::string label_column = "stroke";

    /// The experiment's two encoding axes: smoking status is always ordinal,
    /// work type is the label/one-hot switch, everything else label-encoded.
    static EncodingSpec stroke_default(bool one_hot_work_type);
};

/// Ordinal rank order used for smoking status throughout the experiments.
const std::vector<std::string>& smoking_status_order();

/// Encode a table with no missing cells into a numeric Dataset.
/// Binary categoricals map to {0,1} ("No"/"Yes" map to 0/1, otherwise
/// first-appearance order); Label uses first-appearance integer codes;
/// OneHot emits one "<col>_<category>" indicator per observed category;
/// Ordinal uses the spec's rank index. The label column becomes y.
Dataset encode(const RawTable& raw, const EncodingSpec& spec);

/// Encode every column as a feature, with no label extraction. Used for
/// regression-imputation predictors.
Dataset encode_all_features(const RawTable& raw, const EncodingSpec& spec);

/// First-appearance label codes for one column (code -> category value).
std::vector<std::string> label_categories(const RawTable& raw, const std::string& column);

// ---------------------------------------------------------------------------
// Imputation
// ---------------------------------------------------------------------------

enum class ImputationStrategy { Mean, Regression };

struct ImputationSpec {
    ImputationStrategy strategy = ImputationStrategy::Mean;
    std::string target_column = "bmi";
    /// Predictor encoding for regression imputation; mirrors the
    /// experiment's encoding axis. Label-encodes everything when empty.
    std::optional<EncodingSpec> predictor_encoding;
};

/// Fill missing cells in the target column. Mean: column mean of the
/// non-missing cells. Regression: ordinary least squares (with intercept)
/// of the target on every other encoded column, fitted on the complete
/// rows; singular normal equations fall back to ridge 1e-8 with a warning.
/// Throws when a non-target column has missing cells or when the whole
/// target column is missing.
RawTable impute(const RawTable& raw, const ImputationSpec& spec,
                std::vector<std::string>* warnings = nullptr);

// ---------------------------------------------------------------------------
// Standardization and splitting
// ---------------------------------------------------------------------------

/// Standardize each feature with TRAIN statistics only: (x - mean)/stddev.
/// The identical transform is applied to every dataset in `others`.
/// Zero-variance features use stddev 1 and emit a warning.
std::pair<Dataset, std::vector<Dataset>> standardize(const Dataset& train,
                                                     const std::vector<Dataset>& others,
                                                     std::vector<std::string>* warnings = nullptr);

/// Stratified train/test split: per-class test counts within 1 of
/// count*test_fraction, deterministic per seed, disjoint and exhaustive.
/// Throws when a class has fewer than 2 members.
std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed);

/// The index sets behind split(), in ascending order (train, test).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<int>& y, double test_fraction, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Snapshot export
// ---------------------------------------------------------------------------

/// Write the encoded dataset as CSV (features + label) plus a sidecar JSON
/// with feature names, encoding choices and standardization stats.
void export_snapshot(const Dataset& ds, const EncodingSpec& spec, const std::string& csv_path,
                     const std::string& json_path);

}  // namespace strokelab::ingest
