#include "strokelab/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace strokelab::metrics {

MetricsReport compute_metrics(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.empty()) {
        throw std::invalid_argument("compute_metrics: empty input");
    }
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument("compute_metrics: length mismatch");
    }
    MetricsReport r;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1) {
            (y_pred[i] == 1 ? r.counts.tp : r.counts.fn) += 1;
        } else {
            (y_pred[i] == 1 ? r.counts.fp : r.counts.tn) += 1;
        }
    }
    const auto& c = r.counts;
    r.accuracy = static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
    r.precision = (c.tp + c.fp) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp)
                                    : 0.0;
    r.recall = (c.tp + c.fn) > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn)
                                 : 0.0;
    r.f1 = (r.precision + r.recall) > 0.0
               ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
               : 0.0;
    return r;
}

double roc_auc(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size()) {
        throw std::invalid_argument("roc_auc: length mismatch");
    }
    std::size_t n_pos = 0;
    for (int v : y_true) {
        n_pos += (v == 1);
    }
    const std::size_t n = y_true.size();
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) {
        throw std::invalid_argument("roc_auc: undefined for single-class truth");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Rank sum of positives with average ranks over tied scores.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) {
            ++j;
        }
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (y_true[order[k]] == 1) {
                pos_rank_sum += avg_rank;
            }
        }
        i = j + 1;
    }

    const double u = pos_rank_sum - 0.5 * static_cast<double>(n_pos) *
                                        static_cast<double>(n_pos + 1);
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::string MetricsReport::to_json() const {
    nlohmann::json j{{"accuracy", accuracy}, {"precision", precision}, {"recall", recall},
                     {"f1", f1},             {"tp", counts.tp},        {"fp", counts.fp},
                     {"tn", counts.tn},      {"fn", counts.fn}};
    j["auc"] = auc ? nlohmann::json(*auc) : nlohmann::json(nullptr);
    return j.dump();
}

}  // namespace strokelab::metrics
