#include "strokelab/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/linalg.hpp"
#include "strokelab/rng.hpp"

namespace strokelab::ingest {
namespace {

/// Distinct values of a column in first-appearance order, as strings.
std::vector<std::string> observed_categories(const RawTable& raw, std::size_t col) {
    std::vector<std::string> cats;
    for (const auto& row : raw.rows) {
        const std::string v = cell_to_string(row[col]);
        if (std::find(cats.begin(), cats.end(), v) == cats.end()) {
            cats.push_back(v);
        }
    }
    return cats;
}

bool is_numeric_column(const RawTable& raw, std::size_t col) {
    for (const auto& row : raw.rows) {
        if (!is_number(row[col])) {
            return false;
        }
    }
    return true;
}

/// {No,Yes} style pairs keep their semantic polarity; other binary columns
/// use first-appearance order.
std::vector<std::string> binary_order(std::vector<std::string> cats) {
    if (cats.size() == 2) {
        const bool yes_no = (cats[0] == "Yes" && cats[1] == "No") ||
                            (cats[0] == "No" && cats[1] == "Yes");
        if (yes_no) {
            return {"No", "Yes"};
        }
    }
    return cats;
}

}  // namespace

const std::vector<std::string>& smoking_status_order() {
    static const std::vector<std::string> order = {"Unknown", "never smoked", "formerly smoked",
                                                   "smokes"};
    return order;
}

EncodingSpec EncodingSpec::stroke_default(bool one_hot_work_type) {
    EncodingSpec spec;
    spec.columns["smoking_status"] = {EncodingKind::Ordinal, smoking_status_order()};
    spec.columns["work_type"] = {one_hot_work_type ? EncodingKind::OneHot : EncodingKind::Label,
                                 {}};
    return spec;
}

std::vector<std::string> label_categories(const RawTable& raw, const std::string& column) {
    return observed_categories(raw, raw.column_index(column));
}

namespace {

Dataset encode_impl(const RawTable& raw, const EncodingSpec& spec,
                    std::optional<std::size_t> label_col) {
    for (const auto& row : raw.rows) {
        for (const auto& cell : row) {
            if (is_missing(cell)) {
                throw std::invalid_argument("encode: table still has missing cells");
            }
        }
    }

    Dataset ds;
    std::vector<std::vector<double>> columns;  // encoded feature columns

    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        if (label_col && c == *label_col) {
            continue;
        }
        const std::string& name = raw.column_order[c];
        const auto spec_it = spec.columns.find(name);
        EncodingKind kind =
            spec_it != spec.columns.end() ? spec_it->second.kind : EncodingKind::Label;

        if (is_numeric_column(raw, c) && spec_it == spec.columns.end()) {
            std::vector<double> col(raw.n_rows());
            for (std::size_t r = 0; r < raw.n_rows(); ++r) {
                col[r] = *as_number(raw.rows[r][c]);
            }
            ds.feature_names.push_back(name);
            columns.push_back(std::move(col));
            continue;
        }

        auto cats = observed_categories(raw, c);
        if (kind == EncodingKind::Binary && cats.size() != 2) {
            throw std::invalid_argument("encode: column '" + name + "' has " +
                                        std::to_string(cats.size()) +
                                        " categories, cannot encode as binary");
        }
        if (kind == EncodingKind::Binary ||
            (kind == EncodingKind::Label && cats.size() == 2)) {
            cats = binary_order(std::move(cats));
            kind = EncodingKind::Label;  // two-level label = binary {0,1}
        }

        if (kind == EncodingKind::Ordinal) {
            const auto& order = spec_it->second.ordinal_order;
            std::vector<double> col(raw.n_rows());
            for (std::size_t r = 0; r < raw.n_rows(); ++r) {
                const std::string v = cell_to_string(raw.rows[r][c]);
                const auto it = std::find(order.begin(), order.end(), v);
                if (it == order.end()) {
                    throw std::invalid_argument("encode: ordinal order for '" + name +
                                                "' misses observed category '" + v + "'");
                }
                col[r] = static_cast<double>(it - order.begin());
            }
            ds.feature_names.push_back(name);
            columns.push_back(std::move(col));
        } else if (kind == EncodingKind::OneHot) {
            std::vector<std::size_t> group;
            for (const auto& cat : cats) {
                std::vector<double> col(raw.n_rows());
                for (std::size_t r = 0; r < raw.n_rows(); ++r) {
                    col[r] = cell_to_string(raw.rows[r][c]) == cat ? 1.0 : 0.0;
                }
                group.push_back(ds.feature_names.size());
                ds.feature_names.push_back(name + "_" + cat);
                columns.push_back(std::move(col));
            }
            ds.onehot_groups.push_back(std::move(group));
        } else {
            std::vector<double> col(raw.n_rows());
            for (std::size_t r = 0; r < raw.n_rows(); ++r) {
                const std::string v = cell_to_string(raw.rows[r][c]);
                const auto it = std::find(cats.begin(), cats.end(), v);
                col[r] = static_cast<double>(it - cats.begin());
            }
            ds.feature_names.push_back(name);
            columns.push_back(std::move(col));
        }
    }

    ds.X = Matrix(raw.n_rows(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        for (std::size_t r = 0; r < raw.n_rows(); ++r) {
            ds.X(r, c) = columns[c][r];
        }
    }

    if (label_col) {
        ds.y.resize(raw.n_rows());
        for (std::size_t r = 0; r < raw.n_rows(); ++r) {
            const Cell& cell = raw.rows[r][*label_col];
            const double* num = as_number(cell);
            double v;
            if (num != nullptr) {
                v = *num;
            } else {
                const std::string s = cell_to_string(cell);
                v = (s == "Yes" || s == "1") ? 1.0 : 0.0;
            }
            if (v != 0.0 && v != 1.0) {
                throw std::invalid_argument("encode: label column is not binary");
            }
            ds.y[r] = static_cast<int>(v);
        }
    }
    return ds;
}

}  // namespace

Dataset encode(const RawTable& raw, const EncodingSpec& spec) {
    return encode_impl(raw, spec, raw.column_index(spec.label_column));
}

Dataset encode_all_features(const RawTable& raw, const EncodingSpec& spec) {
    return encode_impl(raw, spec, std::nullopt);
}

RawTable impute(const RawTable& raw, const ImputationSpec& spec,
                std::vector<std::string>* warnings) {
    const std::size_t target = raw.column_index(spec.target_column);
    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        if (c == target) {
            continue;
        }
        for (const auto& row : raw.rows) {
            if (is_missing(row[c])) {
                throw std::invalid_argument("impute: column '" + raw.column_order[c] +
                                            "' has missing cells; only '" + spec.target_column +
                                            "' may be incomplete");
            }
        }
    }

    std::vector<std::size_t> complete;
    std::vector<std::size_t> incomplete;
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        (is_missing(raw.rows[r][target]) ? incomplete : complete).push_back(r);
    }
    if (complete.empty()) {
        throw std::invalid_argument("impute: every cell in target column is missing");
    }
    if (incomplete.empty()) {
        return raw;
    }

    RawTable out = raw;

    if (spec.strategy == ImputationStrategy::Mean) {
        double sum = 0.0;
        for (std::size_t r : complete) {
            const double* v = as_number(raw.rows[r][target]);
            if (v == nullptr) {
                throw std::invalid_argument("impute: target column is not numeric");
            }
            sum += *v;
        }
        const double mean = sum / static_cast<double>(complete.size());
        for (std::size_t r : incomplete) {
            out.rows[r][target] = mean;
        }
        return out;
    }

    // Regression imputation: encode every other column as a predictor and
    // fit OLS with intercept on the complete rows.
    RawTable predictors_table;
    for (std::size_t c = 0; c < raw.n_cols(); ++c) {
        if (c == target) {
            continue;
        }
        predictors_table.column_order.push_back(raw.column_order[c]);
    }
    for (const auto& row : raw.rows) {
        std::vector<Cell> kept;
        for (std::size_t c = 0; c < raw.n_cols(); ++c) {
            if (c != target) {
                kept.push_back(row[c]);
            }
        }
        predictors_table.rows.push_back(std::move(kept));
    }
    EncodingSpec enc = spec.predictor_encoding.value_or(EncodingSpec{});
    enc.columns.erase(spec.target_column);
    Dataset encoded = encode_all_features(predictors_table, enc);
    Matrix full(raw.n_rows(), encoded.X.cols() + 1);
    for (std::size_t r = 0; r < raw.n_rows(); ++r) {
        full(r, 0) = 1.0;  // intercept
        for (std::size_t c = 0; c < encoded.X.cols(); ++c) {
            full(r, c + 1) = encoded.X(r, c);
        }
    }

    Matrix x_fit(complete.size(), full.cols());
    std::vector<double> y_fit(complete.size());
    for (std::size_t i = 0; i < complete.size(); ++i) {
        const std::size_t r = complete[i];
        std::copy(full.row(r).begin(), full.row(r).end(), x_fit.row(i).begin());
        const double* v = as_number(raw.rows[r][target]);
        if (v == nullptr) {
            throw std::invalid_argument("impute: target column is not numeric");
        }
        y_fit[i] = *v;
    }

    const LeastSquaresResult fit = least_squares(x_fit, y_fit);
    if (fit.used_ridge_fallback && warnings != nullptr) {
        warnings->push_back("impute: singular normal equations, used ridge fallback 1e-8");
    }
    for (std::size_t r : incomplete) {
        out.rows[r][target] = dot(full.row(r), fit.coefficients);
    }
    return out;
}

std::pair<Dataset, std::vector<Dataset>> standardize(const Dataset& train,
                                                     const std::vector<Dataset>& others,
                                                     std::vector<std::string>* warnings) {
    if (train.n_rows() == 0) {
        throw std::invalid_argument("standardize: empty train dataset");
    }
    FeatureStats stats;
    stats.means = column_means(train.X);
    stats.stddevs = column_stddevs(train.X, stats.means);
    for (std::size_t c = 0; c < stats.stddevs.size(); ++c) {
        if (stats.stddevs[c] == 0.0) {
            if (warnings != nullptr) {
                warnings->push_back("standardize: zero-variance feature '" +
                                    train.feature_names[c] + "', stddev treated as 1");
            }
            stats.stddevs[c] = 1.0;
        }
    }

    const auto apply = [&](const Dataset& ds) {
        Dataset out = ds;
        for (std::size_t r = 0; r < out.X.rows(); ++r) {
            auto row = out.X.row(r);
            for (std::size_t c = 0; c < out.X.cols(); ++c) {
                row[c] = (row[c] - stats.means[c]) / stats.stddevs[c];
            }
        }
        out.standardization_stats = stats;
        return out;
    };

    Dataset train_out = apply(train);
    std::vector<Dataset> others_out;
    others_out.reserve(others.size());
    for (const auto& ds : others) {
        if (ds.n_features() != train.n_features()) {
            throw std::invalid_argument("standardize: feature count mismatch");
        }
        others_out.push_back(apply(ds));
    }
    return {std::move(train_out), std::move(others_out)};
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const std::vector<int>& y, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("split: test_fraction must be in (0,1)");
    }
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < y.size(); ++i) {
        (y[i] == 1 ? pos : neg).push_back(i);
    }
    for (const auto* cls : {&pos, &neg}) {
        if (cls->size() < 2) {
            throw std::invalid_argument("split: a class has fewer than 2 members");
        }
    }

    Rng rng = make_rng(seed);
    std::vector<std::size_t> test;
    std::vector<std::size_t> train;
    for (auto* cls : {&neg, &pos}) {
        std::shuffle(cls->begin(), cls->end(), rng);
        auto n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(cls->size()) * test_fraction));
        n_test = std::clamp<std::size_t>(n_test, 1, cls->size() - 1);
        test.insert(test.end(), cls->begin(), cls->begin() + n_test);
        train.insert(train.end(), cls->begin() + n_test, cls->end());
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    auto [train_idx, test_idx] = split_indices(ds.y, test_fraction, seed);
    return {ds.take_rows(train_idx), ds.take_rows(test_idx)};
}

void export_snapshot(const Dataset& ds, const EncodingSpec& spec, const std::string& csv_path,
                     const std::string& json_path) {
    std::ofstream csv(csv_path);
    if (!csv) {
        throw std::runtime_error("export_snapshot: cannot write " + csv_path);
    }
    csv.precision(17);
    for (const auto& name : ds.feature_names) {
        csv << name << ',';
    }
    csv << spec.label_column << '\n';
    for (std::size_t r = 0; r < ds.n_rows(); ++r) {
        auto row = ds.X.row(r);
        for (std::size_t c = 0; c < ds.n_features(); ++c) {
            csv << row[c] << ',';
        }
        csv << ds.y[r] << '\n';
    }

    nlohmann::json j;
    j["feature_names"] = ds.feature_names;
    nlohmann::json enc = nlohmann::json::object();
    for (const auto& [name, col] : spec.columns) {
        switch (col.kind) {
            case EncodingKind::Label: enc[name] = "label"; break;
            case EncodingKind::OneHot: enc[name] = "onehot"; break;
            case EncodingKind::Binary: enc[name] = "binary"; break;
            case EncodingKind::Ordinal:
                enc[name] = nlohmann::json{{"ordinal", col.ordinal_order}};
                break;
        }
    }
    j["encoding"] = enc;
    j["label_column"] = spec.label_column;
    if (ds.standardization_stats) {
        j["standardization"] = {{"means", ds.standardization_stats->means},
                                {"stddevs", ds.standardization_stats->stddevs}};
    }
    std::ofstream js(json_path);
    if (!js) {
        throw std::runtime_error("export_snapshot: cannot write " + json_path);
    }
    js << j.dump(2) << '\n';
}

}  // namespace strokelab::ingest
