#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/matrix.hpp"
#include "strokelab/tree.hpp"

namespace strokelab::shallow {

enum class ClassifierKind {
    Logistic,
    LinearSGD,
    DecisionTree,
    AdaBoost,
    GaussianNB,
    QDA,
    MLP,
    KNN,
    GradientBoosting,
};

enum class Penalty { L1, L2 };

/// Algorithm variant plus hyperparameters. One flat struct keeps grid
/// search and serialization simple; each kind reads the fields it owns.
struct ClassifierSpec {
    ClassifierKind kind = ClassifierKind::Logistic;
    std::uint64_t seed = 7;

    // Logistic
    Penalty penalty = Penalty::L2;
    double C = 1.0;
    // LinearSGD (hinge + L2) and MLP share learning_rate/epochs
    double learning_rate = 1e-3;
    int epochs = 1000;
    double l2_alpha = 1e-4;
    // DecisionTree
    SplitCriterion criterion = SplitCriterion::Entropy;
    int max_depth = 3;
    // AdaBoost / GradientBoosting
    int n_estimators = 200;
    double boost_learning_rate = 0.5;
    int tree_depth = 3;
    // QDA
    double reg_param = 0.1;
    double tol = 1e-4;
    bool store_covariance = true;
    // MLP
    int hidden_units = 100;
    // KNN
    int n_neighbors = 11;
    double minkowski_p = 1.0;
    int leaf_size = 1;  // accepted and ignored: search is exact

    /// Throws std::invalid_argument when an invariant is violated.
    void validate() const;
    /// Short display name ("LR", "SGD", "DTC", ...).
    std::string name() const;
    /// Assign a named hyperparameter (grid-search hook).
    void set_param(const std::string& param, double value);

    /// The tuned settings of the paper's comparison table for one kind.
    static ClassifierSpec tuned(ClassifierKind kind, std::uint64_t seed = 7);
    /// All nine implemented kinds with tuned settings, in table order.
    static std::vector<ClassifierSpec> tuned_roster(std::uint64_t seed = 7);
};

/// Opaque fitted model: score(X) in [0,1] plus thresholded labels.
class ClassifierModel {
public:
    virtual ~ClassifierModel() = default;

    /// Probability-like scores in [0,1], one per row.
    std::vector<double> score(const Matrix& X) const;
    std::vector<int> label(const Matrix& X, double threshold = 0.5) const;

    const ClassifierSpec& spec() const { return spec_; }
    std::size_t n_features() const { return n_features_; }

protected:
    virtual std::vector<double> score_impl(const Matrix& X) const = 0;
    virtual void fit_dispatch(const Dataset& train) = 0;

    ClassifierSpec spec_;
    std::size_t n_features_ = 0;

    friend std::unique_ptr<ClassifierModel> fit_classifier(const ClassifierSpec&, const Dataset&);
    friend std::string save_model_json(const ClassifierModel& model);
    friend std::unique_ptr<ClassifierModel> load_model_json(const std::string& json_text);
};

std::unique_ptr<ClassifierModel> fit_classifier(const ClassifierSpec& spec, const Dataset& train);

std::vector<double> predict_scores(const ClassifierModel& model, const Matrix& X);
/// label = 1 iff score > threshold.
std::vector<int> predict_labels(const ClassifierModel& model, const Matrix& X,
                                double threshold = 0.5);

// ---------------------------------------------------------------------------
// Weighted voting
// ---------------------------------------------------------------------------

enum class VotingMetric { F1, Auc };

struct VotingWeighting {
    bool uniform = false;
    VotingMetric metric = VotingMetric::F1;
    double validation_fraction = 0.2;

    static VotingWeighting make_uniform();
    static VotingWeighting metric_proportional(VotingMetric metric,
                                               double validation_fraction = 0.2);
};

/// Soft-voting ensemble: score = sum of weight_i * member_score_i with
/// non-negative weights summing to 1.
class VotingEnsemble : public ClassifierModel {
public:
    const std::vector<std::unique_ptr<ClassifierModel>>& members() const { return members_; }
    const std::vector<double>& weights() const { return weights_; }

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;

private:
    std::vector<std::unique_ptr<ClassifierModel>> members_;
    std::vector<double> weights_;

    friend std::unique_ptr<VotingEnsemble> fit_weighted_voting(
        const std::vector<ClassifierSpec>&, const Dataset&, const VotingWeighting&,
        std::uint64_t);
    friend std::string save_model_json(const ClassifierModel& model);
    friend std::unique_ptr<ClassifierModel> load_model_json(const std::string& json_text);
};

/// Fit each member, derive weights (uniform, or proportional to a holdout
/// metric with weight_i ~ max(metric_i, 1e-3) followed by a refit on the
/// full train set), and assemble the soft-voting ensemble.
std::unique_ptr<VotingEnsemble> fit_weighted_voting(const std::vector<ClassifierSpec>& specs,
                                                    const Dataset& train,
                                                    const VotingWeighting& weighting,
                                                    std::uint64_t seed);

// ---------------------------------------------------------------------------
// Serialization (versioned JSON; trees as nested node records)
// ---------------------------------------------------------------------------

std::string save_model_json(const ClassifierModel& model);
std::unique_ptr<ClassifierModel> load_model_json(const std::string& json_text);

}  // namespace strokelab::shallow
