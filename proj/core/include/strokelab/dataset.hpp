#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "strokelab/matrix.hpp"

namespace strokelab {

/// Per-feature standardization statistics (train-side mean and stddev).
struct FeatureStats {
    std::vector<double> means;
    std::vector<double> stddevs;
};

/// Fully numeric dataset: the unit every pipeline stage consumes and
/// produces. X has one row per sample, y holds the binary stroke label.
struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> feature_names;
    std::optional<FeatureStats> standardization_stats;
    /// Column index groups that came from the same one-hot encoded source
    /// column (used by the collinearity analysis).
    std::vector<std::vector<std::size_t>> onehot_groups;

    std::size_t n_rows() const { return X.rows(); }
    std::size_t n_features() const { return X.cols(); }

    std::size_t count_label(int label) const;
    std::vector<std::size_t> indices_of_label(int label) const;
    /// majority count / minority count; throws if a class is empty.
    double imbalance_ratio() const;

    Dataset take_rows(const std::vector<std::size_t>& indices) const;
};

}  // namespace strokelab
