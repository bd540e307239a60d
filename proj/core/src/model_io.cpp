#include <stdexcept>
#include <string>

#include "json.hpp"

#include "strokelab/shallow.hpp"
#include "strokelab/shallow_models.hpp"

namespace strokelab::shallow {
namespace {

using nlohmann::json;

constexpr int kFormatVersion = 1;

std::string kind_to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Logistic: return "logistic";
        case ClassifierKind::LinearSGD: return "linear_sgd";
        case ClassifierKind::DecisionTree: return "decision_tree";
        case ClassifierKind::AdaBoost: return "adaboost";
        case ClassifierKind::GaussianNB: return "gaussian_nb";
        case ClassifierKind::QDA: return "qda";
        case ClassifierKind::MLP: return "mlp";
        case ClassifierKind::KNN: return "knn";
        case ClassifierKind::GradientBoosting: return "gradient_boosting";
    }
    return "?";
}

ClassifierKind kind_from_string(const std::string& s) {
    if (s == "logistic") return ClassifierKind::Logistic;
    if (s == "linear_sgd") return ClassifierKind::LinearSGD;
    if (s == "decision_tree") return ClassifierKind::DecisionTree;
    if (s == "adaboost") return ClassifierKind::AdaBoost;
    if (s == "gaussian_nb") return ClassifierKind::GaussianNB;
    if (s == "qda") return ClassifierKind::QDA;
    if (s == "mlp") return ClassifierKind::MLP;
    if (s == "knn") return ClassifierKind::KNN;
    if (s == "gradient_boosting") return ClassifierKind::GradientBoosting;
    throw std::runtime_error("unknown classifier kind: " + s);
}

json spec_to_json(const ClassifierSpec& spec) {
    return json{{"kind", kind_to_string(spec.kind)},
                {"seed", spec.seed},
                {"penalty", spec.penalty == Penalty::L1 ? "l1" : "l2"},
                {"C", spec.C},
                {"learning_rate", spec.learning_rate},
                {"epochs", spec.epochs},
                {"l2_alpha", spec.l2_alpha},
                {"criterion", spec.criterion == SplitCriterion::Entropy ? "entropy" : "gini"},
                {"max_depth", spec.max_depth},
                {"n_estimators", spec.n_estimators},
                {"boost_learning_rate", spec.boost_learning_rate},
                {"tree_depth", spec.tree_depth},
                {"reg_param", spec.reg_param},
                {"tol", spec.tol},
                {"hidden_units", spec.hidden_units},
                {"n_neighbors", spec.n_neighbors},
                {"minkowski_p", spec.minkowski_p},
                {"leaf_size", spec.leaf_size}};
}

ClassifierSpec spec_from_json(const json& j) {
    ClassifierSpec spec;
    spec.kind = kind_from_string(j.at("kind").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.penalty = j.at("penalty").get<std::string>() == "l1" ? Penalty::L1 : Penalty::L2;
    spec.C = j.at("C").get<double>();
    spec.learning_rate = j.at("learning_rate").get<double>();
    spec.epochs = j.at("epochs").get<int>();
    spec.l2_alpha = j.at("l2_alpha").get<double>();
    spec.criterion = j.at("criterion").get<std::string>() == "entropy" ? SplitCriterion::Entropy
                                                                       : SplitCriterion::Gini;
    spec.max_depth = j.at("max_depth").get<int>();
    spec.n_estimators = j.at("n_estimators").get<int>();
    spec.boost_learning_rate = j.at("boost_learning_rate").get<double>();
    spec.tree_depth = j.at("tree_depth").get<int>();
    spec.reg_param = j.at("reg_param").get<double>();
    spec.tol = j.at("tol").get<double>();
    spec.hidden_units = j.at("hidden_units").get<int>();
    spec.n_neighbors = j.at("n_neighbors").get<int>();
    spec.minkowski_p = j.at("minkowski_p").get<double>();
    spec.leaf_size = j.at("leaf_size").get<int>();
    return spec;
}

json node_to_json(const DecisionTree& tree, std::size_t index) {
    const TreeNode& node = tree.nodes()[index];
    if (node.is_leaf) {
        return json{{"value", node.value}};
    }
    return json{{"feature", node.feature},
                {"threshold", node.threshold},
                {"value", node.value},
                {"left", node_to_json(tree, node.left)},
                {"right", node_to_json(tree, node.right)}};
}

json tree_to_json(const DecisionTree& tree) { return node_to_json(tree, 0); }

std::size_t node_from_json(const json& j, DecisionTree& tree) {
    const std::size_t index = tree.nodes().size();
    tree.nodes().emplace_back();
    if (!j.contains("feature")) {
        tree.nodes()[index].value = j.at("value").get<double>();
        return index;
    }
    tree.nodes()[index].is_leaf = false;
    tree.nodes()[index].feature = j.at("feature").get<int>();
    tree.nodes()[index].threshold = j.at("threshold").get<double>();
    tree.nodes()[index].value = j.at("value").get<double>();
    const std::size_t left = node_from_json(j.at("left"), tree);
    tree.nodes()[index].left = left;
    const std::size_t right = node_from_json(j.at("right"), tree);
    tree.nodes()[index].right = right;
    return index;
}

DecisionTree tree_from_json(const json& j) {
    DecisionTree tree;
    tree.nodes().clear();
    node_from_json(j, tree);
    return tree;
}

json matrix_to_json(const Matrix& m) {
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.data() = j.at("data").get<std::vector<double>>();
    return m;
}

json payload_to_json(const ClassifierModel& model);

json voting_to_json(const VotingEnsemble& ensemble) {
    json members = json::array();
    for (const auto& member : ensemble.members()) {
        members.push_back(json::parse(save_model_json(*member)));
    }
    return json{{"members", std::move(members)}, {"weights", ensemble.weights()}};
}

json payload_to_json(const ClassifierModel& model) {
    if (const auto* m = dynamic_cast<const LogisticModel*>(&model)) {
        return json{{"weights", m->weights}, {"intercept", m->intercept}};
    }
    if (const auto* m = dynamic_cast<const LinearSgdModel*>(&model)) {
        return json{{"weights", m->weights}, {"intercept", m->intercept}};
    }
    if (const auto* m = dynamic_cast<const DecisionTreeModel*>(&model)) {
        return json{{"tree", tree_to_json(m->tree)}};
    }
    if (const auto* m = dynamic_cast<const AdaBoostModel*>(&model)) {
        json stumps = json::array();
        for (const auto& s : m->stumps) {
            stumps.push_back(tree_to_json(s));
        }
        return json{{"stumps", std::move(stumps)}, {"alphas", m->alphas}};
    }
    if (const auto* m = dynamic_cast<const GaussianNbModel*>(&model)) {
        return json{{"means", {m->means[0], m->means[1]}},
                    {"variances", {m->variances[0], m->variances[1]}},
                    {"priors", {m->priors[0], m->priors[1]}}};
    }
    if (const auto* m = dynamic_cast<const QdaModel*>(&model)) {
        return json{{"means", {m->means[0], m->means[1]}},
                    {"chol", {matrix_to_json(m->chol[0]), matrix_to_json(m->chol[1])}},
                    {"log_sqrt_det", {m->log_sqrt_det[0], m->log_sqrt_det[1]}},
                    {"priors", {m->priors[0], m->priors[1]}}};
    }
    if (const auto* m = dynamic_cast<const MlpModel*>(&model)) {
        return json{{"network", json::parse(neural::save_params_json(m->params))}};
    }
    if (const auto* m = dynamic_cast<const KnnModel*>(&model)) {
        return json{{"train_X", matrix_to_json(m->train_X)}, {"train_y", m->train_y}};
    }
    if (const auto* m = dynamic_cast<const GradientBoostingModel*>(&model)) {
        json trees = json::array();
        for (const auto& t : m->trees) {
            trees.push_back(tree_to_json(t));
        }
        return json{{"trees", std::move(trees)}, {"init_score", m->init_score}};
    }
    throw std::runtime_error("save_model_json: unsupported model type");
}

}  // namespace

std::string save_model_json(const ClassifierModel& model) {
    json j;
    j["format_version"] = kFormatVersion;
    if (const auto* ensemble = dynamic_cast<const VotingEnsemble*>(&model)) {
        j["model"] = "voting";
        j["n_features"] = model.n_features();
        j["payload"] = voting_to_json(*ensemble);
        return j.dump();
    }
    j["model"] = "classifier";
    j["spec"] = spec_to_json(model.spec());
    j["n_features"] = model.n_features();
    j["payload"] = payload_to_json(model);
    return j.dump();
}

std::unique_ptr<ClassifierModel> load_model_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    if (j.at("format_version").get<int>() != kFormatVersion) {
        throw std::runtime_error("load_model_json: unsupported format version");
    }

    if (j.at("model").get<std::string>() == "voting") {
        auto ensemble = std::unique_ptr<VotingEnsemble>(new VotingEnsemble());
        ensemble->n_features_ = j.at("n_features").get<std::size_t>();
        const json& payload = j.at("payload");
        for (const auto& member : payload.at("members")) {
            ensemble->members_.push_back(load_model_json(member.dump()));
        }
        ensemble->weights_ = payload.at("weights").get<std::vector<double>>();
        if (!ensemble->members_.empty()) {
            ensemble->spec_ = ensemble->members_.front()->spec();
        }
        return ensemble;
    }

    const ClassifierSpec spec = spec_from_json(j.at("spec"));
    const json& payload = j.at("payload");
    std::unique_ptr<ClassifierModel> model;
    switch (spec.kind) {
        case ClassifierKind::Logistic: {
            auto m = std::make_unique<LogisticModel>();
            m->weights = payload.at("weights").get<std::vector<double>>();
            m->intercept = payload.at("intercept").get<double>();
            model = std::move(m);
            break;
        }
        case ClassifierKind::LinearSGD: {
            auto m = std::make_unique<LinearSgdModel>();
            m->weights = payload.at("weights").get<std::vector<double>>();
            m->intercept = payload.at("intercept").get<double>();
            model = std::move(m);
            break;
        }
        case ClassifierKind::DecisionTree: {
            auto m = std::make_unique<DecisionTreeModel>();
            m->tree = tree_from_json(payload.at("tree"));
            model = std::move(m);
            break;
        }
        case ClassifierKind::AdaBoost: {
            auto m = std::make_unique<AdaBoostModel>();
            for (const auto& s : payload.at("stumps")) {
                m->stumps.push_back(tree_from_json(s));
            }
            m->alphas = payload.at("alphas").get<std::vector<double>>();
            model = std::move(m);
            break;
        }
        case ClassifierKind::GaussianNB: {
            auto m = std::make_unique<GaussianNbModel>();
            m->means = {payload.at("means")[0].get<std::vector<double>>(),
                        payload.at("means")[1].get<std::vector<double>>()};
            m->variances = {payload.at("variances")[0].get<std::vector<double>>(),
                            payload.at("variances")[1].get<std::vector<double>>()};
            m->priors = {payload.at("priors")[0].get<double>(),
                         payload.at("priors")[1].get<double>()};
            model = std::move(m);
            break;
        }
        case ClassifierKind::QDA: {
            auto m = std::make_unique<QdaModel>();
            m->means = {payload.at("means")[0].get<std::vector<double>>(),
                        payload.at("means")[1].get<std::vector<double>>()};
            m->chol = {matrix_from_json(payload.at("chol")[0]),
                       matrix_from_json(payload.at("chol")[1])};
            m->log_sqrt_det = {payload.at("log_sqrt_det")[0].get<double>(),
                               payload.at("log_sqrt_det")[1].get<double>()};
            m->priors = {payload.at("priors")[0].get<double>(),
                         payload.at("priors")[1].get<double>()};
            model = std::move(m);
            break;
        }
        case ClassifierKind::MLP: {
            auto m = std::make_unique<MlpModel>();
            m->params = neural::load_params_json(payload.at("network").dump());
            model = std::move(m);
            break;
        }
        case ClassifierKind::KNN: {
            auto m = std::make_unique<KnnModel>();
            m->train_X = matrix_from_json(payload.at("train_X"));
            m->train_y = payload.at("train_y").get<std::vector<int>>();
            model = std::move(m);
            break;
        }
        case ClassifierKind::GradientBoosting: {
            auto m = std::make_unique<GradientBoostingModel>();
            for (const auto& t : payload.at("trees")) {
                m->trees.push_back(tree_from_json(t));
            }
            m->init_score = payload.at("init_score").get<double>();
            model = std::move(m);
            break;
        }
    }
    model->spec_ = spec;
    model->n_features_ = j.at("n_features").get<std::size_t>();
    return model;
}

}  // namespace strokelab::shallow
