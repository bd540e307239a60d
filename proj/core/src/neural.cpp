#include "strokelab/neural.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

#include "strokelab/metrics.hpp"
#include "strokelab/rng.hpp"

namespace strokelab::neural {
namespace {

constexpr double kClampEps = 1e-12;

double sigmoid(double u) { return 1.0 / (1.0 + std::exp(-u)); }

/// Per-layer forward cache: pre-activations and activations.
struct ForwardCache {
    std::vector<Matrix> activations;  // activations[0] = X, then post-ReLU
    std::vector<Matrix> pre;          // pre-activations per layer
    std::vector<double> p;            // sigmoid output
};

Matrix affine(const Matrix& input, const Layer& layer) {
    Matrix z = matmul(input, layer.weights);
    for (std::size_t r = 0; r < z.rows(); ++r) {
        auto row = z.row(r);
        for (std::size_t c = 0; c < z.cols(); ++c) {
            row[c] += layer.bias[c];
        }
    }
    return z;
}

ForwardCache forward_cached(const NetworkParams& params, const Matrix& X) {
    if (X.cols() != params.input_dim) {
        throw std::invalid_argument("forward: input dimension mismatch");
    }
    for (double v : X.data()) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("forward: non-finite input");
        }
    }
    ForwardCache cache;
    cache.activations.push_back(X);
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        Matrix z = affine(cache.activations.back(), params.layers[l]);
        cache.pre.push_back(z);
        if (l + 1 < params.layers.size()) {
            for (auto& v : z.data()) {
                v = std::max(v, 0.0);
            }
            cache.activations.push_back(std::move(z));
        }
    }
    const Matrix& out = cache.pre.back();
    cache.p.resize(out.rows());
    for (std::size_t r = 0; r < out.rows(); ++r) {
        cache.p[r] = sigmoid(out(r, 0));
    }
    return cache;
}

/// d(mean loss)/du at the output pre-activation, per sample. Samples whose
/// probability sits in the clamped region get zero slope.
std::vector<double> output_delta(const std::vector<double>& p, const std::vector<int>& y,
                                 const LossSpec& spec) {
    const std::size_t n = p.size();
    std::vector<double> delta(n);
    const double gamma = spec.kind == LossKind::Focal ? spec.gamma : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= kClampEps || p[i] >= 1.0 - kClampEps) {
            delta[i] = 0.0;
            continue;
        }
        const double sign = y[i] == 1 ? 1.0 : -1.0;
        const double pt = y[i] == 1 ? p[i] : 1.0 - p[i];
        const double one_minus = 1.0 - pt;
        double d;
        if (gamma == 0.0) {
            d = -sign * one_minus;  // reduces to p - y
        } else {
            d = sign * (gamma * pt * std::pow(one_minus, gamma) * std::log(pt) -
                        std::pow(one_minus, gamma + 1.0));
        }
        delta[i] = d / static_cast<double>(n);
    }
    return delta;
}

NetworkParams zeros_like(const NetworkParams& params) {
    NetworkParams g;
    g.input_dim = params.input_dim;
    g.layers.reserve(params.layers.size());
    for (const auto& layer : params.layers) {
        g.layers.push_back({Matrix(layer.weights.rows(), layer.weights.cols()),
                            std::vector<double>(layer.bias.size(), 0.0)});
    }
    return g;
}

NetworkParams backprop(const NetworkParams& params, const ForwardCache& cache,
                       const std::vector<int>& y, const LossSpec& spec) {
    NetworkParams grads = zeros_like(params);
    const std::size_t n_layers = params.layers.size();

    std::vector<double> out_delta = output_delta(cache.p, y, spec);
    Matrix delta(out_delta.size(), 1);
    for (std::size_t i = 0; i < out_delta.size(); ++i) {
        delta(i, 0) = out_delta[i];
        if (!std::isfinite(out_delta[i])) {
            throw std::runtime_error("gradients: non-finite value at output layer");
        }
    }

    for (std::size_t l = n_layers; l-- > 0;) {
        const Matrix& input = cache.activations[l];
        grads.layers[l].weights = matmul_at(input, delta);
        auto& db = grads.layers[l].bias;
        for (std::size_t r = 0; r < delta.rows(); ++r) {
            for (std::size_t c = 0; c < delta.cols(); ++c) {
                db[c] += delta(r, c);
            }
        }
        for (double v : grads.layers[l].weights.data()) {
            if (!std::isfinite(v)) {
                throw std::runtime_error("gradients: non-finite value at layer " +
                                         std::to_string(l));
            }
        }
        if (l == 0) {
            break;
        }
        Matrix prev = matmul_bt(delta, params.layers[l].weights);
        const Matrix& pre_prev = cache.pre[l - 1];
        for (std::size_t r = 0; r < prev.rows(); ++r) {
            for (std::size_t c = 0; c < prev.cols(); ++c) {
                if (pre_prev(r, c) <= 0.0) {
                    prev(r, c) = 0.0;
                }
            }
        }
        delta = std::move(prev);
    }
    return grads;
}

struct Momentum {
    NetworkParams velocity;
};

void apply_update(NetworkParams& params, const NetworkParams& grads, Momentum& mom, double step,
                  double momentum) {
    for (std::size_t l = 0; l < params.layers.size(); ++l) {
        auto& vw = mom.velocity.layers[l].weights.data();
        const auto& gw = grads.layers[l].weights.data();
        auto& w = params.layers[l].weights.data();
        for (std::size_t i = 0; i < w.size(); ++i) {
            vw[i] = momentum * vw[i] - step * gw[i];
            w[i] += vw[i];
        }
        auto& vb = mom.velocity.layers[l].bias;
        const auto& gb = grads.layers[l].bias;
        auto& b = params.layers[l].bias;
        for (std::size_t i = 0; i < b.size(); ++i) {
            vb[i] = momentum * vb[i] - step * gb[i];
            b[i] += vb[i];
        }
    }
}

void record_eval(const NetworkParams& params, const Dataset* eval, TrainingHistory& history) {
    if (eval == nullptr) {
        return;
    }
    const std::vector<double> p = forward(params, eval->X);
    std::vector<int> labels(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        labels[i] = p[i] > kDnnLabelThreshold ? 1 : 0;
    }
    const auto report = metrics::compute_metrics(eval->y, labels);
    history.eval_f1.push_back(report.f1);
    history.eval_accuracy.push_back(report.accuracy);
    std::vector<double> label_scores(labels.begin(), labels.end());
    history.eval_auc.push_back(metrics::roc_auc(eval->y, label_scores));
}

}  // namespace

std::vector<std::size_t> NetworkParams::hidden_sizes() const {
    std::vector<std::size_t> sizes;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        sizes.push_back(layers[l].weights.cols());
    }
    return sizes;
}

NetworkParams init_network(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                           std::uint64_t seed) {
    if (input_dim < 1) {
        throw std::invalid_argument("init_network: input_dim must be >= 1");
    }
    Rng rng = make_rng(seed);
    NetworkParams params;
    params.input_dim = input_dim;

    std::vector<std::size_t> dims;
    dims.push_back(input_dim);
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(1);

    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t fan_in = dims[l];
        const std::size_t fan_out = dims[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        std::uniform_real_distribution<double> uniform(-bound, bound);
        Layer layer{Matrix(fan_in, fan_out), std::vector<double>(fan_out, 0.0)};
        for (auto& w : layer.weights.data()) {
            w = uniform(rng);
        }
        params.layers.push_back(std::move(layer));
    }
    return params;
}

std::vector<double> forward(const NetworkParams& params, const Matrix& X) {
    return forward_cached(params, X).p;
}

LossValue compute_loss(const std::vector<double>& p, const std::vector<int>& y,
                       const LossSpec& spec) {
    if (p.size() != y.size()) {
        throw std::invalid_argument("compute_loss: length mismatch");
    }
    LossValue out;
    out.p_t.resize(p.size());
    double sum = 0.0;
    const double gamma = spec.kind == LossKind::Focal ? spec.gamma : 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double clamped = std::clamp(p[i], kClampEps, 1.0 - kClampEps);
        const double pt = y[i] == 1 ? clamped : 1.0 - clamped;
        out.p_t[i] = pt;
        double loss = -std::log(pt);
        if (gamma > 0.0) {
            loss *= std::pow(1.0 - pt, gamma);
        }
        sum += loss;
    }
    out.mean = sum / static_cast<double>(p.size());
    return out;
}

NetworkParams gradients(const NetworkParams& params, const Matrix& X, const std::vector<int>& y,
                        const LossSpec& spec) {
    const ForwardCache cache = forward_cached(params, X);
    return backprop(params, cache, y, spec);
}

std::pair<NetworkParams, TrainingHistory> train(NetworkParams params, const Dataset& train_ds,
                                                const TrainOptions& options, const Dataset* eval) {
    if (options.epochs < 1) {
        throw std::invalid_argument("train: epochs must be >= 1");
    }
    const std::size_t n = train_ds.n_rows();
    const std::size_t batch_size = std::min(options.batch_size, n);

    Momentum mom{zeros_like(params)};
    TrainingHistory history;
    Rng rng = make_rng(options.seed);

    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        const std::vector<std::size_t> order = shuffled_indices(n, rng);
        double loss_sum = 0.0;
        for (std::size_t start = 0; start < n; start += batch_size) {
            const std::size_t end = std::min(start + batch_size, n);
            std::vector<std::size_t> batch(order.begin() + start, order.begin() + end);
            // Canonical accumulation order: bitwise-stable regardless of
            // how the shuffle arranged the batch.
            std::sort(batch.begin(), batch.end());

            Matrix bx = train_ds.X.take_rows(batch);
            std::vector<int> by;
            by.reserve(batch.size());
            for (std::size_t i : batch) {
                by.push_back(train_ds.y[i]);
            }

            const ForwardCache cache = forward_cached(params, bx);
            const LossValue loss = compute_loss(cache.p, by, options.loss);
            if (!std::isfinite(loss.mean)) {
                throw std::runtime_error("train: loss diverged at epoch " +
                                         std::to_string(epoch));
            }
            loss_sum += loss.mean * static_cast<double>(batch.size());

            const NetworkParams grads = backprop(params, cache, by, options.loss);
            apply_update(params, grads, mom, options.step, options.momentum);
        }
        history.epoch_loss.push_back(loss_sum / static_cast<double>(n));
        record_eval(params, eval, history);
    }
    return {std::move(params), std::move(history)};
}

std::pair<NetworkParams, TrainingHistory> train_cluster_batches(
    NetworkParams params, const std::vector<resample::ClusterBatch>& batches,
    const TrainOptions& options, const Dataset* eval) {
    if (batches.empty()) {
        throw std::invalid_argument("train_cluster_batches: no batches");
    }
    for (const auto& b : batches) {
        if (b.data.n_features() != params.input_dim) {
            throw std::invalid_argument("train_cluster_batches: feature dimension mismatch");
        }
    }

    Momentum mom{zeros_like(params)};
    TrainingHistory history;
    Rng rng = make_rng(options.seed);

    for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
        const std::vector<std::size_t> order = shuffled_indices(batches.size(), rng);
        double loss_sum = 0.0;
        for (std::size_t b : order) {
            const Dataset& data = batches[b].data;
            const ForwardCache cache = forward_cached(params, data.X);
            const LossValue loss = compute_loss(cache.p, data.y, options.loss);
            if (!std::isfinite(loss.mean)) {
                throw std::runtime_error("train_cluster_batches: loss diverged at epoch " +
                                         std::to_string(epoch));
            }
            loss_sum += loss.mean;

            const NetworkParams grads = backprop(params, cache, data.y, options.loss);
            apply_update(params, grads, mom, options.step, options.momentum);
        }
        history.epoch_loss.push_back(loss_sum / static_cast<double>(batches.size()));
        record_eval(params, eval, history);
    }
    return {std::move(params), std::move(history)};
}

std::string save_params_json(const NetworkParams& params) {
    nlohmann::json j;
    j["format_version"] = 1;
    j["input_dim"] = params.input_dim;
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : params.layers) {
        nlohmann::json lj;
        lj["rows"] = layer.weights.rows();
        lj["cols"] = layer.weights.cols();
        lj["weights"] = layer.weights.data();
        lj["bias"] = layer.bias;
        layers.push_back(std::move(lj));
    }
    j["layers"] = std::move(layers);
    return j.dump();
}

NetworkParams load_params_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.at("format_version").get<int>() != 1) {
        throw std::runtime_error("load_params_json: unsupported format version");
    }
    NetworkParams params;
    params.input_dim = j.at("input_dim").get<std::size_t>();
    for (const auto& lj : j.at("layers")) {
        Layer layer;
        layer.weights = Matrix(lj.at("rows").get<std::size_t>(), lj.at("cols").get<std::size_t>());
        layer.weights.data() = lj.at("weights").get<std::vector<double>>();
        layer.bias = lj.at("bias").get<std::vector<double>>();
        params.layers.push_back(std::move(layer));
    }
    return params;
}

void export_history_csv(const TrainingHistory& history, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("export_history_csv: cannot write " + path);
    }
    out.precision(17);
    out << "epoch,loss,f1,auc\n";
    for (std::size_t e = 0; e < history.epoch_loss.size(); ++e) {
        out << (e + 1) << ',' << history.epoch_loss[e] << ',';
        if (e < history.eval_f1.size()) {
            out << history.eval_f1[e] << ',' << history.eval_auc[e];
        } else {
            out << ',';
        }
        out << '\n';
    }
}

}  // namespace strokelab::neural
