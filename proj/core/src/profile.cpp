#include "strokelab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/linalg.hpp"

namespace strokelab::profile {
namespace {

/// Features plus the label as one matrix; the label becomes the last column.
Matrix augmented_matrix(const Dataset& ds) {
    Matrix m(ds.n_rows(), ds.n_features() + 1);
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        auto src = ds.X.row(r);
        auto dst = m.row(r);
        std::copy(src.begin(), src.end(), dst.begin());
        dst[ds.n_features()] = static_cast<double>(ds.y[r]);
    }
    return m;
}

Matrix pearson(const Matrix& m, std::vector<std::size_t>* constant_columns) {
    const std::size_t d = m.cols();
    const auto means = column_means(m);
    const auto stddevs = column_stddevs(m, means);

    Matrix corr(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        corr(i, i) = 1.0;
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (stddevs[i] == 0.0 && constant_columns != nullptr) {
            constant_columns->push_back(i);
        }
    }
    const double n = static_cast<double>(m.rows());
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i + 1; j < d; ++j) {
            double cov = 0.0;
            for (std::size_t r = 0; r < m.rows(); ++r) {
                cov += (m(r, i) - means[i]) * (m(r, j) - means[j]);
            }
            cov /= n;
            const double denom = stddevs[i] * stddevs[j];
            const double value = denom > 0.0 ? std::clamp(cov / denom, -1.0, 1.0) : 0.0;
            corr(i, j) = value;
            corr(j, i) = value;
        }
    }
    return corr;
}

/// VIF over arbitrary columns with optional sibling groups to exclude.
std::vector<double> vif_of_matrix(const Matrix& m,
                                  const std::vector<std::vector<std::size_t>>& groups) {
    const std::size_t d = m.cols();
    const std::size_t n = m.rows();
    if (n < d + 1) {
        throw std::invalid_argument("vif: need at least n_features + 1 rows");
    }
    const auto means = column_means(m);

    std::vector<int> group_of(d, -1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t c : groups[g]) {
            if (c < d) {
                group_of[c] = static_cast<int>(g);
            }
        }
    }

    std::vector<double> out(d);
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<std::size_t> predictors;
        for (std::size_t c = 0; c < d; ++c) {
            if (c == j) {
                continue;
            }
            if (group_of[j] >= 0 && group_of[c] == group_of[j]) {
                continue;  // one-hot sibling
            }
            predictors.push_back(c);
        }

        double tss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dv = m(r, j) - means[j];
            tss += dv * dv;
        }
        if (tss == 0.0) {
            out[j] = 1.0;  // constant column: nothing to inflate
            continue;
        }

        Matrix design(n, predictors.size() + 1);
        std::vector<double> target(n);
        for (std::size_t r = 0; r < n; ++r) {
            design(r, 0) = 1.0;
            for (std::size_t p = 0; p < predictors.size(); ++p) {
                design(r, p + 1) = m(r, predictors[p]);
            }
            target[r] = m(r, j);
        }
        const LeastSquaresResult fit = least_squares(design, target);
        double rss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double resid = target[r] - dot(design.row(r), fit.coefficients);
            rss += resid * resid;
        }
        const double r2 = 1.0 - rss / tss;
        out[j] = r2 >= 1.0 - 1e-9 ? std::numeric_limits<double>::infinity()
                                  : 1.0 / (1.0 - r2);
    }
    return out;
}

}  // namespace

Matrix correlation_matrix(const Dataset& ds, std::vector<std::string>* warnings) {
    if (ds.n_rows() < 2) {
        throw std::invalid_argument("correlation_matrix: need at least 2 rows");
    }
    std::vector<std::size_t> constant_columns;
    Matrix corr = pearson(augmented_matrix(ds), &constant_columns);
    if (warnings != nullptr) {
        for (std::size_t c : constant_columns) {
            const std::string name =
                c < ds.feature_names.size() ? ds.feature_names[c] : std::string("label");
            warnings->push_back("correlation_matrix: constant column '" + name + "'");
        }
    }
    return corr;
}

std::vector<double> vif(const Dataset& ds) {
    return vif_of_matrix(ds.X, ds.onehot_groups);
}

std::vector<double> tree_importance(const Dataset& ds, int max_depth,
                                    shallow::SplitCriterion criterion) {
    if (ds.count_label(0) == 0 || ds.count_label(1) == 0) {
        throw std::invalid_argument("tree_importance: both classes must be present");
    }
    shallow::DecisionTree tree;
    const std::vector<double> weights(ds.n_rows(), 1.0);
    tree.fit(ds.X, ds.y, weights, criterion, max_depth);
    return tree.feature_importance(ds.n_features());
}

FeatureReport profile_report(const Dataset& ds, int tree_max_depth,
                             shallow::SplitCriterion criterion) {
    FeatureReport report;
    report.names = ds.feature_names;
    report.names.push_back("stroke");
    report.correlation = correlation_matrix(ds);
    report.vif = vif_of_matrix(augmented_matrix(ds), ds.onehot_groups);
    report.importance = tree_importance(ds, tree_max_depth, criterion);
    return report;
}

std::string FeatureReport::to_json() const {
    nlohmann::json j;
    j["names"] = names;
    nlohmann::json corr = nlohmann::json::array();
    for (std::size_t r = 0; r < correlation.rows(); ++r) {
        corr.push_back(std::vector<double>(correlation.row(r).begin(), correlation.row(r).end()));
    }
    j["correlation"] = std::move(corr);
    nlohmann::json vif_json = nlohmann::json::array();
    for (double v : vif) {
        vif_json.push_back(std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v));
    }
    j["vif"] = std::move(vif_json);
    j["importance"] = importance;
    return j.dump(2);
}

std::string FeatureReport::to_markdown() const {
    std::ostringstream out;
    out << "| Feature | VIF | Importance |\n|---|---|---|\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << "| " << names[i] << " | ";
        if (i < vif.size()) {
            if (std::isinf(vif[i])) {
                out << "inf";
            } else {
                out.precision(3);
                out << vif[i];
            }
        }
        out << " | ";
        if (i < importance.size()) {
            out.precision(4);
            out << importance[i];
        }
        out << " |\n";
    }
    return out.str();
}

std::string vif_comparison_markdown(const Dataset& label_ds, const Dataset& onehot_ds,
                                    const std::string& label_name) {
    const auto label_vif = vif_of_matrix(augmented_matrix(label_ds), label_ds.onehot_groups);
    const auto onehot_vif = vif_of_matrix(augmented_matrix(onehot_ds), onehot_ds.onehot_groups);

    const auto format = [](double v) {
        std::ostringstream s;
        s.precision(3);
        if (std::isinf(v)) {
            s << "inf";
        } else {
            s << v;
        }
        return s.str();
    };

    std::vector<int> onehot_group_of(onehot_ds.n_features(), -1);
    for (std::size_t g = 0; g < onehot_ds.onehot_groups.size(); ++g) {
        for (std::size_t c : onehot_ds.onehot_groups[g]) {
            onehot_group_of[c] = static_cast<int>(g);
        }
    }

    std::ostringstream out;
    out << "| Features | Label | One-Hot |\n|---|---|---|\n";
    std::size_t onehot_col = 0;
    for (std::size_t i = 0; i < label_ds.n_features(); ++i) {
        out << "| " << label_ds.feature_names[i] << " | " << format(label_vif[i]) << " | ";
        if (onehot_col < onehot_ds.n_features() && onehot_group_of[onehot_col] >= 0) {
            // Fold the whole indicator group into this row.
            const int group = onehot_group_of[onehot_col];
            bool first = true;
            while (onehot_col < onehot_ds.n_features() && onehot_group_of[onehot_col] == group) {
                if (!first) {
                    out << ", ";
                }
                out << "(" << onehot_ds.feature_names[onehot_col] << ") "
                    << format(onehot_vif[onehot_col]);
                first = false;
                ++onehot_col;
            }
        } else if (onehot_col < onehot_ds.n_features()) {
            out << format(onehot_vif[onehot_col]);
            ++onehot_col;
        }
        out << " |\n";
    }
    out << "| " << label_name << " | " << format(label_vif[label_ds.n_features()]) << " | "
        << format(onehot_vif[onehot_ds.n_features()]) << " |\n";
    return out.str();
}

}  // namespace strokelab::profile
