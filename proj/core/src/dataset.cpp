#include "strokelab/dataset.hpp"

#include <stdexcept>

namespace strokelab {

std::size_t Dataset::count_label(int label) const {
    std::size_t n = 0;
    for (int v : y) {
        if (v == label) {
            ++n;
        }
    }
    return n;
}

std::vector<std::size_t> Dataset::indices_of_label(int label) const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == label) {
            idx.push_back(i);
        }
    }
    return idx;
}

double Dataset::imbalance_ratio() const {
    const auto pos = static_cast<double>(count_label(1));
    const auto neg = static_cast<double>(count_label(0));
    if (pos == 0 || neg == 0) {
        throw std::invalid_argument("imbalance_ratio: a class is empty");
    }
    const double minority = std::min(pos, neg);
    const double majority = std::max(pos, neg);
    return majority / minority;
}

Dataset Dataset::take_rows(const std::vector<std::size_t>& indices) const {
    Dataset out;
    out.X = X.take_rows(indices);
    out.y.reserve(indices.size());
    for (std::size_t i : indices) {
        out.y.push_back(y[i]);
    }
    out.feature_names = feature_names;
    out.standardization_stats = standardization_stats;
    out.onehot_groups = onehot_groups;
    return out;
}

}  // namespace strokelab
