#pragma once

// Concrete fitted-model state behind the ClassifierModel interface.
// Internal header shared by the fit dispatch and the JSON serializer.

#include <array>
#include <vector>

#include "strokelab/neural.hpp"
#include "strokelab/shallow.hpp"
#include "strokelab/tree.hpp"

namespace strokelab::shallow {

class LogisticModel : public ClassifierModel {
public:
    std::vector<double> weights;
    double intercept = 0.0;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class LinearSgdModel : public ClassifierModel {
public:
    std::vector<double> weights;
    double intercept = 0.0;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class DecisionTreeModel : public ClassifierModel {
public:
    DecisionTree tree;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class AdaBoostModel : public ClassifierModel {
public:
    std::vector<DecisionTree> stumps;
    std::vector<double> alphas;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class GaussianNbModel : public ClassifierModel {
public:
    std::array<std::vector<double>, 2> means;
    std::array<std::vector<double>, 2> variances;
    std::array<double, 2> priors{0.5, 0.5};

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class QdaModel : public ClassifierModel {
public:
    std::array<std::vector<double>, 2> means;
    std::array<Matrix, 2> chol;  // Cholesky factors of the shrunk covariances
    std::array<double, 2> log_sqrt_det{0.0, 0.0};
    std::array<double, 2> priors{0.5, 0.5};

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class MlpModel : public ClassifierModel {
public:
    neural::NetworkParams params;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class KnnModel : public ClassifierModel {
public:
    Matrix train_X;
    std::vector<int> train_y;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

class GradientBoostingModel : public ClassifierModel {
public:
    std::vector<DecisionTree> trees;
    double init_score = 0.0;

protected:
    std::vector<double> score_impl(const Matrix& X) const override;
    void fit_dispatch(const Dataset& train) override;
};

}  // namespace strokelab::shallow
