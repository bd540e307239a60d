#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace strokelab::metrics {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

/// Confusion-derived metrics for the positive (stroke) class. auc is only
/// present when a score-based computation was attached.
struct MetricsReport {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> auc;
    ConfusionCounts counts;

    std::string to_json() const;
};

/// Standard confusion metrics of binary predictions. Precision, recall and
/// F1 are 0 when their denominator is 0. Throws on empty or mismatched input.
MetricsReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred);

/// ROC AUC as the Mann-Whitney statistic: (wins + 0.5*ties) / (n_pos*n_neg)
/// over all positive-negative score pairs, computed via average ranks.
/// Throws when only one class is present (undefined, not 0.5).
double roc_auc(std::span<const int> y_true, std::span<const double> scores);

}  // namespace strokelab::metrics
