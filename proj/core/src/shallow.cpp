#include "strokelab/shallow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "strokelab/ingest.hpp"
#include "strokelab/linalg.hpp"
#include "strokelab/metrics.hpp"
#include "strokelab/neural.hpp"
#include "strokelab/rng.hpp"
#include "strokelab/shallow_models.hpp"

namespace strokelab::shallow {
namespace {

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

void require_both_classes(const Dataset& ds, const char* who) {
    if (ds.n_rows() == 0) {
        throw std::invalid_argument(std::string(who) + ": empty dataset");
    }
    if (ds.count_label(1) == 0 || ds.count_label(0) == 0) {
        throw std::invalid_argument(std::string(who) + ": both classes must be present");
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Spec
// ---------------------------------------------------------------------------

void ClassifierSpec::validate() const {
    if (C <= 0.0) {
        throw std::invalid_argument("ClassifierSpec: C must be > 0");
    }
    if (max_depth < 1 || tree_depth < 1) {
        throw std::invalid_argument("ClassifierSpec: depths must be >= 1");
    }
    if (n_estimators < 1) {
        throw std::invalid_argument("ClassifierSpec: n_estimators must be >= 1");
    }
    if (reg_param < 0.0 || reg_param > 1.0) {
        throw std::invalid_argument("ClassifierSpec: reg_param must be in [0,1]");
    }
    if (n_neighbors < 1) {
        throw std::invalid_argument("ClassifierSpec: n_neighbors must be >= 1");
    }
    if (epochs < 1) {
        throw std::invalid_argument("ClassifierSpec: epochs must be >= 1");
    }
}

std::string ClassifierSpec::name() const {
    switch (kind) {
        case ClassifierKind::Logistic: return "LR";
        case ClassifierKind::LinearSGD: return "SGD";
        case ClassifierKind::DecisionTree: return "DTC";
        case ClassifierKind::AdaBoost: return "AdaBoost";
        case ClassifierKind::GaussianNB: return "Gaussian";
        case ClassifierKind::QDA: return "QDA";
        case ClassifierKind::MLP: return "MLP";
        case ClassifierKind::KNN: return "KNeighbors";
        case ClassifierKind::GradientBoosting: return "GBC";
    }
    return "?";
}

void ClassifierSpec::set_param(const std::string& param, double value) {
    if (param == "C") {
        C = value;
    } else if (param == "learning_rate") {
        if (kind == ClassifierKind::AdaBoost || kind == ClassifierKind::GradientBoosting) {
            boost_learning_rate = value;
        } else {
            learning_rate = value;
        }
    } else if (param == "epochs") {
        epochs = static_cast<int>(value);
    } else if (param == "max_depth") {
        max_depth = static_cast<int>(value);
    } else if (param == "tree_depth") {
        tree_depth = static_cast<int>(value);
    } else if (param == "n_estimators") {
        n_estimators = static_cast<int>(value);
    } else if (param == "reg_param") {
        reg_param = value;
    } else if (param == "tol") {
        tol = value;
    } else if (param == "hidden_units") {
        hidden_units = static_cast<int>(value);
    } else if (param == "n_neighbors") {
        n_neighbors = static_cast<int>(value);
    } else if (param == "minkowski_p") {
        minkowski_p = value;
    } else if (param == "leaf_size") {
        leaf_size = static_cast<int>(value);
    } else if (param == "l2_alpha") {
        l2_alpha = value;
    } else {
        throw std::invalid_argument("ClassifierSpec: unknown parameter '" + param + "'");
    }
}

ClassifierSpec ClassifierSpec::tuned(ClassifierKind kind, std::uint64_t seed) {
    ClassifierSpec spec;
    spec.kind = kind;
    spec.seed = seed;
    switch (kind) {
        case ClassifierKind::Logistic:
            spec.penalty = Penalty::L1;
            spec.C = 0.2336;
            break;
        case ClassifierKind::LinearSGD:
            spec.learning_rate = 1e-3;
            spec.epochs = 1000;
            break;
        case ClassifierKind::DecisionTree:
            spec.criterion = SplitCriterion::Entropy;
            spec.max_depth = 3;
            break;
        case ClassifierKind::AdaBoost:
            spec.boost_learning_rate = 0.5;
            spec.n_estimators = 200;
            break;
        case ClassifierKind::GaussianNB:
            break;
        case ClassifierKind::QDA:
            spec.reg_param = 0.1;
            spec.tol = 1e-4;
            break;
        case ClassifierKind::MLP:
            spec.hidden_units = 100;
            spec.epochs = 200;
            spec.learning_rate = 1e-3;
            break;
        case ClassifierKind::KNN:
            spec.n_neighbors = 11;
            spec.minkowski_p = 1.0;
            spec.leaf_size = 1;
            break;
        case ClassifierKind::GradientBoosting:
            spec.n_estimators = 80;
            spec.boost_learning_rate = 0.1;
            spec.tree_depth = 3;
            break;
    }
    return spec;
}

std::vector<ClassifierSpec> ClassifierSpec::tuned_roster(std::uint64_t seed) {
    std::vector<ClassifierSpec> roster;
    for (ClassifierKind kind :
         {ClassifierKind::Logistic, ClassifierKind::LinearSGD, ClassifierKind::DecisionTree,
          ClassifierKind::AdaBoost, ClassifierKind::GaussianNB, ClassifierKind::QDA,
          ClassifierKind::MLP, ClassifierKind::KNN, ClassifierKind::GradientBoosting}) {
        roster.push_back(tuned(kind, seed));
    }
    return roster;
}

// ---------------------------------------------------------------------------
// Model base
// ---------------------------------------------------------------------------

std::vector<double> ClassifierModel::score(const Matrix& X) const {
    if (X.cols() != n_features_) {
        throw std::invalid_argument("score: feature dimension mismatch");
    }
    return score_impl(X);
}

std::vector<int> ClassifierModel::label(const Matrix& X, double threshold) const {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw std::invalid_argument("label: threshold must be in (0,1)");
    }
    const std::vector<double> s = score(X);
    std::vector<int> labels(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        labels[i] = s[i] > threshold ? 1 : 0;
    }
    return labels;
}

std::vector<double> predict_scores(const ClassifierModel& model, const Matrix& X) {
    return model.score(X);
}

std::vector<int> predict_labels(const ClassifierModel& model, const Matrix& X, double threshold) {
    return model.label(X, threshold);
}

// ---------------------------------------------------------------------------
// Logistic regression (FISTA; L1 via soft-thresholding)
// ---------------------------------------------------------------------------

namespace {

struct LogisticObjective {
    const Matrix& X;
    const std::vector<int>& y;
    double C;

    // C * sum log(1 + exp(-z * f)), z in {-1, +1}
    double loss(const std::vector<double>& w, double b) const {
        double total = 0.0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double f = dot(X.row(r), w) + b;
            const double z = y[r] == 1 ? 1.0 : -1.0;
            const double m = -z * f;
            total += m > 30.0 ? m : std::log1p(std::exp(m));
        }
        return C * total;
    }

    void grad(const std::vector<double>& w, double b, std::vector<double>& gw,
              double& gb) const {
        std::fill(gw.begin(), gw.end(), 0.0);
        gb = 0.0;
        for (std::size_t r = 0; r < X.rows(); ++r) {
            const double f = dot(X.row(r), w) + b;
            const double z = y[r] == 1 ? 1.0 : -1.0;
            const double s = -z * sigmoid(-z * f);
            auto row = X.row(r);
            for (std::size_t c = 0; c < gw.size(); ++c) {
                gw[c] += s * row[c];
            }
            gb += s;
        }
        for (auto& g : gw) {
            g *= C;
        }
        gb *= C;
    }
};

}  // namespace

std::vector<double> LogisticModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        out[r] = sigmoid(dot(X.row(r), weights) + intercept);
    }
    return out;
}

void LogisticModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "Logistic");
    const std::size_t d = train.n_features();
    weights.assign(d, 0.0);
    intercept = 0.0;

    LogisticObjective objective{train.X, train.y, spec_.C};
    const bool l1 = spec_.penalty == Penalty::L1;

    // FISTA with backtracking. The penalty term: ||w||_1 or 0.5*||w||_2^2
    // (intercept unpenalized).
    std::vector<double> w = weights;
    std::vector<double> w_prev = w;
    double b = 0.0;
    double b_prev = 0.0;
    double t_accel = 1.0;
    double lipschitz = 1.0;
    std::vector<double> gw(d);
    std::vector<double> yw = w;
    double yb = b;

    const int max_iter = 600;
    for (int iter = 0; iter < max_iter; ++iter) {
        double gb = 0.0;
        objective.grad(yw, yb, gw, gb);
        if (!l1) {
            for (std::size_t c = 0; c < d; ++c) {
                gw[c] += yw[c];
            }
        }
        const double f_y = objective.loss(yw, yb) +
                           (l1 ? 0.0
                               : 0.5 * std::inner_product(yw.begin(), yw.end(), yw.begin(), 0.0));

        std::vector<double> w_new(d);
        double b_new = 0.0;
        while (true) {
            const double step = 1.0 / lipschitz;
            for (std::size_t c = 0; c < d; ++c) {
                const double v = yw[c] - step * gw[c];
                w_new[c] = l1 ? std::copysign(std::max(std::abs(v) - step, 0.0), v) : v;
            }
            b_new = yb - step * gb;

            const double f_new =
                objective.loss(w_new, b_new) +
                (l1 ? 0.0
                    : 0.5 * std::inner_product(w_new.begin(), w_new.end(), w_new.begin(), 0.0));
            double quad = f_y;
            double dist_sq = 0.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = w_new[c] - yw[c];
                quad += gw[c] * diff;
                dist_sq += diff * diff;
            }
            quad += gb * (b_new - yb);
            dist_sq += (b_new - yb) * (b_new - yb);
            quad += 0.5 * lipschitz * dist_sq;
            if (f_new <= quad + 1e-12 || lipschitz > 1e12) {
                break;
            }
            lipschitz *= 2.0;
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            shift = std::max(shift, std::abs(w_new[c] - w[c]));
        }
        shift = std::max(shift, std::abs(b_new - b));

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_accel * t_accel));
        const double beta = (t_accel - 1.0) / t_next;
        for (std::size_t c = 0; c < d; ++c) {
            yw[c] = w_new[c] + beta * (w_new[c] - w[c]);
        }
        yb = b_new + beta * (b_new - b);
        w_prev = std::move(w);
        w = w_new;
        b_prev = b;
        b = b_new;
        t_accel = t_next;

        if (shift < 1e-10) {
            break;
        }
    }
    weights = w;
    intercept = b;
}

// ---------------------------------------------------------------------------
// Linear SGD (hinge + L2)
// ---------------------------------------------------------------------------

std::vector<double> LinearSgdModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        out[r] = sigmoid(dot(X.row(r), weights) + intercept);
    }
    return out;
}

void LinearSgdModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "LinearSGD");
    const std::size_t d = train.n_features();
    weights.assign(d, 0.0);
    intercept = 0.0;

    Rng rng = make_rng(spec_.seed);
    const double eta0 = spec_.learning_rate;
    const double alpha = spec_.l2_alpha;
    std::size_t t = 0;
    for (int epoch = 0; epoch < spec_.epochs; ++epoch) {
        const auto order = shuffled_indices(train.n_rows(), rng);
        for (std::size_t i : order) {
            ++t;
            const double eta = eta0 / (1.0 + eta0 * alpha * static_cast<double>(t));
            const double z = train.y[i] == 1 ? 1.0 : -1.0;
            const double margin = z * (dot(train.X.row(i), weights) + intercept);
            for (std::size_t c = 0; c < d; ++c) {
                weights[c] -= eta * alpha * weights[c];
            }
            if (margin < 1.0) {
                auto row = train.X.row(i);
                for (std::size_t c = 0; c < d; ++c) {
                    weights[c] += eta * z * row[c];
                }
                intercept += eta * z;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Decision tree
// ---------------------------------------------------------------------------

std::vector<double> DecisionTreeModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        out[r] = tree.predict_row(X.row(r));
    }
    return out;
}

void DecisionTreeModel::fit_dispatch(const Dataset& train) {
    if (train.n_rows() == 0) {
        throw std::invalid_argument("DecisionTree: empty dataset");
    }
    const std::vector<double> weights(train.n_rows(), 1.0);
    tree.fit(train.X, train.y, weights, spec_.criterion, spec_.max_depth);
}

// ---------------------------------------------------------------------------
// AdaBoost (SAMME over depth-1 stumps)
// ---------------------------------------------------------------------------

std::vector<double> AdaBoostModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        double f = 0.0;
        for (std::size_t t = 0; t < stumps.size(); ++t) {
            const double h = stumps[t].predict_row(X.row(r)) > 0.5 ? 1.0 : -1.0;
            f += alphas[t] * h;
        }
        out[r] = sigmoid(f);
    }
    return out;
}

void AdaBoostModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "AdaBoost");
    const std::size_t n = train.n_rows();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));

    for (int t = 0; t < spec_.n_estimators; ++t) {
        DecisionTree stump;
        stump.fit(train.X, train.y, w, SplitCriterion::Gini, 1);

        double err = 0.0;
        std::vector<int> pred(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = stump.predict_row(train.X.row(i)) > 0.5 ? 1 : 0;
            if (pred[i] != train.y[i]) {
                err += w[i];
            }
        }
        if (err >= 0.5) {
            break;
        }
        const double clamped = std::max(err, 1e-12);
        const double alpha = spec_.boost_learning_rate * std::log((1.0 - clamped) / clamped);
        stumps.push_back(std::move(stump));
        alphas.push_back(alpha);
        if (err <= 0.0) {
            break;  // perfect stump: its vote dominates
        }

        double w_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != train.y[i]) {
                w[i] *= std::exp(alpha);
            }
            w_sum += w[i];
        }
        for (auto& v : w) {
            v /= w_sum;
        }
    }

    if (stumps.empty()) {
        // No stump beat chance: fall back to the class prior vote.
        DecisionTree prior;
        const std::vector<double> uniform(n, 1.0 / static_cast<double>(n));
        prior.fit(train.X, train.y, uniform, SplitCriterion::Gini, 0);
        stumps.push_back(std::move(prior));
        alphas.push_back(0.0);
    }
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes
// ---------------------------------------------------------------------------

std::vector<double> GaussianNbModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto row = X.row(r);
        double log_joint[2];
        for (int cls = 0; cls < 2; ++cls) {
            double lj = std::log(priors[cls]);
            for (std::size_t c = 0; c < row.size(); ++c) {
                const double var = variances[cls][c];
                const double diff = row[c] - means[cls][c];
                lj += -0.5 * std::log(2.0 * std::numbers::pi * var) - 0.5 * diff * diff / var;
            }
            log_joint[cls] = lj;
        }
        const double m = std::max(log_joint[0], log_joint[1]);
        const double e0 = std::exp(log_joint[0] - m);
        const double e1 = std::exp(log_joint[1] - m);
        out[r] = e1 / (e0 + e1);
    }
    return out;
}

void GaussianNbModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "GaussianNB");
    const std::size_t d = train.n_features();
    for (int cls = 0; cls < 2; ++cls) {
        const auto idx = train.indices_of_label(cls);
        const Matrix sub = train.X.take_rows(idx);
        means[cls] = column_means(sub);
        const auto stddev = column_stddevs(sub, means[cls]);
        variances[cls].resize(d);
        for (std::size_t c = 0; c < d; ++c) {
            variances[cls][c] = std::max(stddev[c] * stddev[c], 1e-9);
        }
        priors[cls] = static_cast<double>(idx.size()) / static_cast<double>(train.n_rows());
    }
}

// ---------------------------------------------------------------------------
// QDA
// ---------------------------------------------------------------------------

std::vector<double> QdaModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    const std::size_t d = n_features_;
    for (std::size_t r = 0; r < X.rows(); ++r) {
        auto row = X.row(r);
        double log_joint[2];
        for (int cls = 0; cls < 2; ++cls) {
            std::vector<double> diff(d);
            for (std::size_t c = 0; c < d; ++c) {
                diff[c] = row[c] - means[cls][c];
            }
            // Mahalanobis via the cached Cholesky factor of the shrunk
            // covariance: solve L z = diff, |z|^2 = diff' Sigma^-1 diff.
            std::vector<double> z(d);
            for (std::size_t i = 0; i < d; ++i) {
                double s = diff[i];
                for (std::size_t k = 0; k < i; ++k) {
                    s -= chol[cls](i, k) * z[k];
                }
                z[i] = s / chol[cls](i, i);
            }
            double maha = 0.0;
            for (double v : z) {
                maha += v * v;
            }
            log_joint[cls] = std::log(priors[cls]) - 0.5 * maha - log_sqrt_det[cls];
        }
        const double m = std::max(log_joint[0], log_joint[1]);
        const double e0 = std::exp(log_joint[0] - m);
        const double e1 = std::exp(log_joint[1] - m);
        out[r] = e1 / (e0 + e1);
    }
    return out;
}

void QdaModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "QDA");
    const std::size_t d = train.n_features();
    for (int cls = 0; cls < 2; ++cls) {
        const auto idx = train.indices_of_label(cls);
        if (idx.size() < 2) {
            throw std::invalid_argument("QDA: a class has fewer than 2 samples");
        }
        const Matrix sub = train.X.take_rows(idx);
        means[cls] = column_means(sub);
        Matrix cov = covariance_matrix(sub, means[cls]);
        // Shrinkage (1-reg)*Sigma + reg*I
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                cov(i, j) *= (1.0 - spec_.reg_param);
            }
            cov(i, i) += spec_.reg_param;
        }

        // Cholesky; failure means a degenerate covariance that shrinkage
        // did not repair.
        Matrix l(d, d);
        double log_det = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double s = cov(i, j);
                for (std::size_t k = 0; k < j; ++k) {
                    s -= l(i, k) * l(j, k);
                }
                if (i == j) {
                    if (s <= 0.0 || !std::isfinite(s)) {
                        throw std::runtime_error(
                            "QDA: degenerate class covariance (increase reg_param)");
                    }
                    l(i, i) = std::sqrt(s);
                    log_det += std::log(l(i, i));
                } else {
                    l(i, j) = s / l(j, j);
                }
            }
        }
        chol[cls] = std::move(l);
        log_sqrt_det[cls] = log_det;  // log sqrt(det) = sum log diag(L)
        priors[cls] = static_cast<double>(idx.size()) / static_cast<double>(train.n_rows());
    }
}

// ---------------------------------------------------------------------------
// MLP (one hidden ReLU layer trained by the neural engine under CE)
// ---------------------------------------------------------------------------

std::vector<double> MlpModel::score_impl(const Matrix& X) const {
    return neural::forward(params, X);
}

void MlpModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "MLP");
    params = neural::init_network(train.n_features(),
                                  {static_cast<std::size_t>(spec_.hidden_units)}, spec_.seed);
    neural::TrainOptions options;
    options.epochs = static_cast<std::size_t>(spec_.epochs);
    options.batch_size = 32;
    options.loss = neural::LossSpec::cross_entropy();
    options.step = spec_.learning_rate;
    options.seed = spec_.seed;
    params = neural::train(std::move(params), train, options).first;
}

// ---------------------------------------------------------------------------
// KNN (exact search; leaf_size only tunes an index, so it is ignored)
// ---------------------------------------------------------------------------

std::vector<double> KnnModel::score_impl(const Matrix& X) const {
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(spec_.n_neighbors),
                                                train_X.rows());
    std::vector<double> out(X.rows());
    std::vector<std::pair<double, std::size_t>> dist(train_X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        for (std::size_t i = 0; i < train_X.rows(); ++i) {
            dist[i] = {minkowski_distance(X.row(r), train_X.row(i), spec_.minkowski_p), i};
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k), dist.end());
        std::size_t pos = 0;
        for (std::size_t j = 0; j < k; ++j) {
            pos += train_y[dist[j].second] == 1 ? 1 : 0;
        }
        out[r] = static_cast<double>(pos) / static_cast<double>(k);
    }
    return out;
}

void KnnModel::fit_dispatch(const Dataset& train) {
    if (train.n_rows() == 0) {
        throw std::invalid_argument("KNN: empty dataset");
    }
    train_X = train.X;
    train_y = train.y;
}

// ---------------------------------------------------------------------------
// Gradient boosting (logistic loss over depth-limited regression trees)
// ---------------------------------------------------------------------------

std::vector<double> GradientBoostingModel::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        double f = init_score;
        for (const auto& tree : trees) {
            f += spec_.boost_learning_rate * tree.predict_row(X.row(r));
        }
        out[r] = sigmoid(f);
    }
    return out;
}

void GradientBoostingModel::fit_dispatch(const Dataset& train) {
    require_both_classes(train, "GradientBoosting");
    const std::size_t n = train.n_rows();
    const double p_prior = static_cast<double>(train.count_label(1)) / static_cast<double>(n);
    init_score = std::log(p_prior / (1.0 - p_prior));

    std::vector<double> f(n, init_score);
    std::vector<double> residual(n);
    for (int t = 0; t < spec_.n_estimators; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            residual[i] = static_cast<double>(train.y[i]) - sigmoid(f[i]);
        }
        DecisionTree tree;
        std::vector<std::size_t> leaf_of;
        tree.fit_regression(train.X, residual, spec_.tree_depth, &leaf_of);

        // Newton leaf values for the binomial deviance.
        std::vector<double> num(tree.nodes().size(), 0.0);
        std::vector<double> den(tree.nodes().size(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double p = sigmoid(f[i]);
            num[leaf_of[i]] += residual[i];
            den[leaf_of[i]] += p * (1.0 - p);
        }
        for (std::size_t leaf = 0; leaf < tree.nodes().size(); ++leaf) {
            if (tree.nodes()[leaf].is_leaf && den[leaf] > 1e-12) {
                tree.nodes()[leaf].value = std::clamp(num[leaf] / den[leaf], -4.0, 4.0);
            } else if (tree.nodes()[leaf].is_leaf) {
                tree.nodes()[leaf].value = 0.0;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            f[i] += spec_.boost_learning_rate * tree.nodes()[leaf_of[i]].value;
        }
        trees.push_back(std::move(tree));
    }
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

std::unique_ptr<ClassifierModel> fit_classifier(const ClassifierSpec& spec, const Dataset& train) {
    spec.validate();
    std::unique_ptr<ClassifierModel> model;
    switch (spec.kind) {
        case ClassifierKind::Logistic: model = std::make_unique<LogisticModel>(); break;
        case ClassifierKind::LinearSGD: model = std::make_unique<LinearSgdModel>(); break;
        case ClassifierKind::DecisionTree: model = std::make_unique<DecisionTreeModel>(); break;
        case ClassifierKind::AdaBoost: model = std::make_unique<AdaBoostModel>(); break;
        case ClassifierKind::GaussianNB: model = std::make_unique<GaussianNbModel>(); break;
        case ClassifierKind::QDA: model = std::make_unique<QdaModel>(); break;
        case ClassifierKind::MLP: model = std::make_unique<MlpModel>(); break;
        case ClassifierKind::KNN: model = std::make_unique<KnnModel>(); break;
        case ClassifierKind::GradientBoosting:
            model = std::make_unique<GradientBoostingModel>();
            break;
    }
    model->spec_ = spec;
    model->n_features_ = train.n_features();
    model->fit_dispatch(train);
    return model;
}

// ---------------------------------------------------------------------------
// Weighted voting
// ---------------------------------------------------------------------------

VotingWeighting VotingWeighting::make_uniform() {
    VotingWeighting w;
    w.uniform = true;
    return w;
}

VotingWeighting VotingWeighting::metric_proportional(VotingMetric metric,
                                                     double validation_fraction) {
    VotingWeighting w;
    w.uniform = false;
    w.metric = metric;
    w.validation_fraction = validation_fraction;
    return w;
}

void VotingEnsemble::fit_dispatch(const Dataset&) {
    throw std::logic_error("VotingEnsemble is assembled by fit_weighted_voting");
}

std::vector<double> VotingEnsemble::score_impl(const Matrix& X) const {
    std::vector<double> out(X.rows(), 0.0);
    for (std::size_t m = 0; m < members_.size(); ++m) {
        const std::vector<double> s = members_[m]->score(X);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += weights_[m] * s[i];
        }
    }
    return out;
}

std::unique_ptr<VotingEnsemble> fit_weighted_voting(const std::vector<ClassifierSpec>& specs,
                                                    const Dataset& train,
                                                    const VotingWeighting& weighting,
                                                    std::uint64_t seed) {
    if (specs.size() < 2) {
        throw std::invalid_argument("fit_weighted_voting: need at least 2 member specs");
    }
    auto ensemble = std::unique_ptr<VotingEnsemble>(new VotingEnsemble());
    ensemble->n_features_ = train.n_features();
    ensemble->spec_ = specs.front();

    std::vector<double> weights(specs.size(), 1.0 / static_cast<double>(specs.size()));
    if (!weighting.uniform) {
        const auto [fit_part, holdout] =
            ingest::split(train, weighting.validation_fraction, seed);
        if (holdout.count_label(0) == 0 || holdout.count_label(1) == 0) {
            throw std::invalid_argument("fit_weighted_voting: validation holdout lacks a class");
        }
        double total = 0.0;
        for (std::size_t m = 0; m < specs.size(); ++m) {
            const auto member = fit_classifier(specs[m], fit_part);
            double metric = 0.0;
            if (weighting.metric == VotingMetric::F1) {
                const auto labels = member->label(holdout.X, 0.5);
                metric = metrics::compute_metrics(holdout.y, labels).f1;
            } else {
                const auto scores = member->score(holdout.X);
                metric = metrics::roc_auc(holdout.y, scores);
            }
            weights[m] = std::max(metric, 1e-3);
            total += weights[m];
        }
        for (auto& w : weights) {
            w /= total;
        }
    }

    for (const auto& spec : specs) {
        ensemble->members_.push_back(fit_classifier(spec, train));
    }
    ensemble->weights_ = std::move(weights);
    return ensemble;
}

}  // namespace strokelab::shallow
