#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "strokelab/dataset.hpp"
#include "strokelab/matrix.hpp"
#include "strokelab/resample.hpp"

namespace strokelab::neural {

/// Decision threshold for DNN label predictions.
inline constexpr double kDnnLabelThreshold = 0.25;

struct Layer {
    Matrix weights;  // fan_in x fan_out
    std::vector<double> bias;
};

/// Fully connected network: ReLU after each hidden layer, sigmoid on the
/// final scalar output.
struct NetworkParams {
    std::vector<Layer> layers;
    std::size_t input_dim = 0;

    std::vector<std::size_t> hidden_sizes() const;
};

/// The experiment architecture: hidden channels 64, 128, 256, output 1.
inline const std::vector<std::size_t> kDefaultHidden = {64, 128, 256};

/// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
/// Deterministic per seed. An empty hidden list degenerates to a single
/// sigmoid layer.
NetworkParams init_network(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                           std::uint64_t seed);

/// Batched forward pass; outputs in (0,1).
std::vector<double> forward(const NetworkParams& params, const Matrix& X);

enum class LossKind { CrossEntropy, Focal };

struct LossSpec {
    LossKind kind = LossKind::CrossEntropy;
    double gamma = 2.0;  // only read for Focal

    static LossSpec cross_entropy() { return {LossKind::CrossEntropy, 0.0}; }
    static LossSpec focal(double gamma = 2.0) { return {LossKind::Focal, gamma}; }
};

struct LossValue {
    double mean = 0.0;
    std::vector<double> p_t;  // probability of the true class, per sample
};

/// CE(p_t) = -log(p_t); focal = (1-p_t)^gamma * -log(p_t), with p clamped
/// to [1e-12, 1-1e-12].
LossValue compute_loss(const std::vector<double>& p, const std::vector<int>& y,
                       const LossSpec& spec);

/// Parameter-shaped gradients of the mean loss over (X, y) by exact
/// backpropagation; samples clamped at the probability boundary get zero
/// slope.
NetworkParams gradients(const NetworkParams& params, const Matrix& X, const std::vector<int>& y,
                        const LossSpec& spec);

struct TrainingHistory {
    std::vector<double> epoch_loss;
    std::vector<double> eval_f1;        // empty when no eval set was given
    std::vector<double> eval_auc;       // label-based AUC at the DNN threshold
    std::vector<double> eval_accuracy;
};

struct TrainOptions {
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    LossSpec loss;
    double step = 1e-3;
    double momentum = 0.9;
    std::uint64_t seed = 7;
};

/// Mini-batch momentum SGD. Batches are re-drawn per epoch from a seeded
/// shuffle; gradient accumulation per batch runs in ascending original row
/// order so results are bit-reproducible. Throws on a non-finite loss
/// (with the epoch index).
std::pair<NetworkParams, TrainingHistory> train(NetworkParams params, const Dataset& train,
                                                const TrainOptions& options,
                                                const Dataset* eval = nullptr);

/// Cluster-batch training: each epoch visits every cluster batch once as a
/// full gradient batch, in seeded-shuffled order. The epoch loss is the
/// unweighted mean over batch losses.
std::pair<NetworkParams, TrainingHistory> train_cluster_batches(
    NetworkParams params, const std::vector<resample::ClusterBatch>& batches,
    const TrainOptions& options, const Dataset* eval = nullptr);

/// Versioned JSON round-trip of the layer matrices.
std::string save_params_json(const NetworkParams& params);
NetworkParams load_params_json(const std::string& json_text);

/// CSV export: epoch, loss, f1, auc.
void export_history_csv(const TrainingHistory& history, const std::string& path);

}  // namespace strokelab::neural
