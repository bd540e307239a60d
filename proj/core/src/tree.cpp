#include "strokelab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace strokelab::shallow {
namespace {

double impurity(double w_pos, double w_total, SplitCriterion criterion) {
    if (w_total <= 0.0) {
        return 0.0;
    }
    const double p = w_pos / w_total;
    if (criterion == SplitCriterion::Gini) {
        return 2.0 * p * (1.0 - p);
    }
    double h = 0.0;
    if (p > 0.0) {
        h -= p * std::log2(p);
    }
    if (p < 1.0) {
        h -= (1.0 - p) * std::log2(1.0 - p);
    }
    return h;
}

struct BestSplit {
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

}  // namespace

void DecisionTree::fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                       SplitCriterion criterion, int max_depth) {
    if (X.rows() == 0 || X.rows() != y.size() || y.size() != weights.size()) {
        throw std::invalid_argument("DecisionTree::fit: bad input shapes");
    }
    nodes_.clear();
    node_gain_.clear();

    struct Work {
        std::size_t node;
        std::vector<std::size_t> samples;
        int depth;
    };

    std::vector<std::size_t> all(X.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    nodes_.emplace_back();
    node_gain_.push_back(0.0);

    std::vector<Work> stack;
    stack.push_back({0, std::move(all), 0});

    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        TreeNode& node = nodes_[work.node];

        double w_total = 0.0;
        double w_pos = 0.0;
        for (std::size_t i : work.samples) {
            w_total += weights[i];
            w_pos += weights[i] * (y[i] == 1 ? 1.0 : 0.0);
        }
        node.value = w_total > 0.0 ? w_pos / w_total : 0.0;

        const double node_impurity = impurity(w_pos, w_total, criterion);
        if (work.depth >= max_depth || node_impurity <= 0.0 || work.samples.size() < 2) {
            continue;
        }

        BestSplit best;
        std::vector<std::size_t> sorted = work.samples;
        for (std::size_t f = 0; f < X.cols(); ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return X(a, f) < X(b, f);
            });
            double left_w = 0.0;
            double left_pos = 0.0;
            for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
                const std::size_t i = sorted[k];
                left_w += weights[i];
                left_pos += weights[i] * (y[i] == 1 ? 1.0 : 0.0);
                const double v = X(i, f);
                const double v_next = X(sorted[k + 1], f);
                if (v == v_next) {
                    continue;
                }
                const double right_w = w_total - left_w;
                const double right_pos = w_pos - left_pos;
                const double child =
                    (left_w * impurity(left_pos, left_w, criterion) +
                     right_w * impurity(right_pos, right_w, criterion)) /
                    w_total;
                const double gain = node_impurity - child;
                if (gain > best.gain + 1e-15) {
                    best = {static_cast<int>(f), 0.5 * (v + v_next), gain};
                }
            }
        }

        if (best.feature < 0) {
            continue;
        }

        std::vector<std::size_t> left_samples;
        std::vector<std::size_t> right_samples;
        for (std::size_t i : work.samples) {
            (X(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_samples
                                                                            : right_samples)
                .push_back(i);
        }
        if (left_samples.empty() || right_samples.empty()) {
            continue;
        }

        node.is_leaf = false;
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = nodes_.size();
        node.right = nodes_.size() + 1;
        node_gain_[work.node] = best.gain * w_total;
        nodes_.emplace_back();
        node_gain_.push_back(0.0);
        nodes_.emplace_back();
        node_gain_.push_back(0.0);

        stack.push_back({nodes_[work.node].right, std::move(right_samples), work.depth + 1});
        stack.push_back({nodes_[work.node].left, std::move(left_samples), work.depth + 1});
    }
}

void DecisionTree::fit_regression(const Matrix& X, std::span<const double> targets, int max_depth,
                                  std::vector<std::size_t>* leaf_of) {
    if (X.rows() == 0 || X.rows() != targets.size()) {
        throw std::invalid_argument("DecisionTree::fit_regression: bad input shapes");
    }
    nodes_.clear();
    node_gain_.clear();
    if (leaf_of != nullptr) {
        leaf_of->assign(X.rows(), 0);
    }

    struct Work {
        std::size_t node;
        std::vector<std::size_t> samples;
        int depth;
    };

    std::vector<std::size_t> all(X.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    nodes_.emplace_back();
    node_gain_.push_back(0.0);
    std::vector<Work> stack;
    stack.push_back({0, std::move(all), 0});

    while (!stack.empty()) {
        Work work = std::move(stack.back());
        stack.pop_back();
        TreeNode& node = nodes_[work.node];

        double sum = 0.0;
        double sq = 0.0;
        for (std::size_t i : work.samples) {
            sum += targets[i];
            sq += targets[i] * targets[i];
        }
        const double n = static_cast<double>(work.samples.size());
        node.value = sum / n;
        const double sse = sq - sum * sum / n;

        if (work.depth >= max_depth || sse <= 1e-12 || work.samples.size() < 2) {
            if (leaf_of != nullptr) {
                for (std::size_t i : work.samples) {
                    (*leaf_of)[i] = work.node;
                }
            }
            continue;
        }

        BestSplit best;
        std::vector<std::size_t> sorted = work.samples;
        for (std::size_t f = 0; f < X.cols(); ++f) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return X(a, f) < X(b, f);
            });
            double left_sum = 0.0;
            double left_n = 0.0;
            for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
                const std::size_t i = sorted[k];
                left_sum += targets[i];
                left_n += 1.0;
                const double v = X(i, f);
                const double v_next = X(sorted[k + 1], f);
                if (v == v_next) {
                    continue;
                }
                const double right_sum = sum - left_sum;
                const double right_n = n - left_n;
                // Variance reduction up to constants: sum of per-side
                // (mean^2 * count) maximizes the split quality.
                const double gain = left_sum * left_sum / left_n +
                                    right_sum * right_sum / right_n - sum * sum / n;
                if (gain > best.gain + 1e-15) {
                    best = {static_cast<int>(f), 0.5 * (v + v_next), gain};
                }
            }
        }

        if (best.feature < 0) {
            if (leaf_of != nullptr) {
                for (std::size_t i : work.samples) {
                    (*leaf_of)[i] = work.node;
                }
            }
            continue;
        }

        std::vector<std::size_t> left_samples;
        std::vector<std::size_t> right_samples;
        for (std::size_t i : work.samples) {
            (X(i, static_cast<std::size_t>(best.feature)) <= best.threshold ? left_samples
                                                                            : right_samples)
                .push_back(i);
        }
        node.is_leaf = false;
        node.feature = best.feature;
        node.threshold = best.threshold;
        node.left = nodes_.size();
        node.right = nodes_.size() + 1;
        node_gain_[work.node] = best.gain;
        nodes_.emplace_back();
        node_gain_.push_back(0.0);
        nodes_.emplace_back();
        node_gain_.push_back(0.0);

        stack.push_back({nodes_[work.node].right, std::move(right_samples), work.depth + 1});
        stack.push_back({nodes_[work.node].left, std::move(left_samples), work.depth + 1});
    }
}

double DecisionTree::predict_row(std::span<const double> x) const {
    return nodes_[leaf_index(x)].value;
}

std::size_t DecisionTree::leaf_index(std::span<const double> x) const {
    std::size_t node = 0;
    while (!nodes_[node].is_leaf) {
        const auto& n = nodes_[node];
        node = x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return node;
}

std::vector<double> DecisionTree::feature_importance(std::size_t n_features) const {
    std::vector<double> importance(n_features, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].is_leaf) {
            importance[static_cast<std::size_t>(nodes_[i].feature)] += node_gain_[i];
            total += node_gain_[i];
        }
    }
    if (total > 0.0) {
        for (auto& v : importance) {
            v /= total;
        }
    }
    return importance;
}

}  // namespace strokelab::shallow
