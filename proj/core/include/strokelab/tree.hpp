#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "strokelab/matrix.hpp"

namespace strokelab::shallow {

enum class SplitCriterion { Entropy, Gini };

struct TreeNode {
    bool is_leaf = true;
    int feature = -1;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    /// Leaf payload: positive-class fraction for classification trees,
    /// fitted value for regression trees.
    double value = 0.0;
};

/// Greedy binary CART tree. Exact split search over midpoints of distinct
/// consecutive values; ties between equal-gain splits go to the lowest
/// feature index.
class DecisionTree {
public:
    /// Weighted binary classification fit.
    void fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
             SplitCriterion criterion, int max_depth);

    /// Regression fit (variance reduction); used by gradient boosting.
    /// leaf_of receives, per sample, the leaf node index it landed in.
    void fit_regression(const Matrix& X, std::span<const double> targets, int max_depth,
                        std::vector<std::size_t>* leaf_of = nullptr);

    double predict_row(std::span<const double> x) const;
    std::size_t leaf_index(std::span<const double> x) const;

    std::vector<TreeNode>& nodes() { return nodes_; }
    const std::vector<TreeNode>& nodes() const { return nodes_; }

    /// Total weighted impurity decrease per feature, normalized to sum 1
    /// (all-zero when the tree is a single leaf).
    std::vector<double> feature_importance(std::size_t n_features) const;

private:
    std::vector<TreeNode> nodes_;
    std::vector<double> node_gain_;  // weighted impurity decrease per node
};

}  // namespace strokelab::shallow
