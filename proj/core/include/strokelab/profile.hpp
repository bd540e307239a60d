#pragma once

#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/matrix.hpp"
#include "strokelab/tree.hpp"

namespace strokelab::profile {

/// Feature analysis results for one encoded dataset. Correlation and VIF
/// cover the features plus the label column (the label row mirrors the
/// published table); importance covers features only.
struct FeatureReport {
    std::vector<std::string> names;  // feature names + label name
    Matrix correlation;
    std::vector<double> vif;  // +infinity flags exact collinearity
    std::vector<double> importance;

    std::string to_json() const;
    /// Markdown table: feature, VIF, importance.
    std::string to_markdown() const;
};

/// Pearson correlation over features plus the label column. Constant
/// columns correlate 0 against everything (diagonal stays 1) and are
/// reported through `warnings`.
Matrix correlation_matrix(const Dataset& ds, std::vector<std::string>* warnings = nullptr);

/// VIF_j = 1/(1 - R^2_j) from an interceptful OLS of feature j on the
/// other features. Exact fits (duplicated features) become +infinity.
/// Indicator columns from one one-hot group are excluded from each
/// other's regressions; with the full group present the identity
/// sum(indicators) = 1 would otherwise flag every group member.
std::vector<double> vif(const Dataset& ds);

/// Impurity-decrease feature importance of the decision tree, normalized
/// to sum 1. Throws on single-class data.
std::vector<double> tree_importance(const Dataset& ds, int max_depth,
                                    shallow::SplitCriterion criterion);

FeatureReport profile_report(const Dataset& ds, int tree_max_depth = 3,
                             shallow::SplitCriterion criterion = shallow::SplitCriterion::Entropy);

/// Side-by-side VIF table over the label-encoded and one-hot datasets,
/// matching the published comparison layout (one-hot groups are folded
/// into a single row).
std::string vif_comparison_markdown(const Dataset& label_ds, const Dataset& onehot_ds,
                                    const std::string& label_name = "Stroke");

}  // namespace strokelab::profile
