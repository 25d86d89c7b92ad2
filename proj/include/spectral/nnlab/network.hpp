#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "spectral/linalg/dense_matrix.hpp"
#include "spectral/nnlab/dataset.hpp"

namespace spectral::nnlab {

enum class Activation : std::uint8_t { Linear, Relu };

struct ConvSpec {
    int filters = 1;
    int kernel = 3;
    int stride = 1;
    Activation act = Activation::Relu;
};

struct DenseSpec {
    int units = 1;
    Activation act = Activation::Relu;
};

struct FlattenSpec {};

using LayerSpec = std::variant<ConvSpec, DenseSpec, FlattenSpec>;

struct Shape3 {
    int h = 1, w = 1, c = 1;
    int size() const { return h * w * c; }
    bool flat() const { return h == 1 && w == 1; }
};

struct NetworkConfig {
    Shape3 input;
    std::vector<LayerSpec> layers;
    int representation_layer = 0;  // index into layers; output must be flat
    int num_classes = 2;
    std::uint64_t seed = 0;
};

struct TrainConfig {
    int epochs = 10;
    int batch_size = 32;
    double learning_rate = 0.05;
    double momentum = 0.9;
    std::vector<std::pair<int, double>> lr_decay;  // (epoch, factor), applied entering epoch
    std::uint64_t seed = 0;
};

struct EpochStats {
    double loss = 0.0;      // mean training cross-entropy over the epoch
    double accuracy = 0.0;  // training accuracy (pre-update logits)
};

// Parameter gradients, aligned with the network's layers.
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};

// Feed-forward network of conv / flatten / dense layers trained with softmax
// cross-entropy. Double precision throughout; all batch loops are
// deterministic at any OpenMP thread count (per-output-cell reductions in
// fixed order).
class Network {
public:
    // Glorot-uniform init (bound sqrt(6/(fan_in+fan_out))), deterministic in
    // cfg.seed. Rejects inconsistent layer chains with the offending index.
    static Network init(const NetworkConfig& cfg);

    const NetworkConfig& config() const { return cfg_; }
    int representation_width() const;
    int parameter_count() const;

    struct ForwardResult {
        linalg::DenseMatrix logits;           // n x num_classes
        linalg::DenseMatrix representations;  // n x representation width
    };
    // batch: n * input_size contiguous doubles
    ForwardResult forward(std::span<const double> batch, int n) const;

    // Mean softmax cross-entropy over the batch plus gradients for every
    // parameter; returns the loss. `grads` is resized to fit. When
    // `correct_out` is given it receives the argmax-match count of this pass.
    double loss_and_gradients(std::span<const double> batch, int n,
                              std::span<const int> labels, Gradients& grads,
                              int* correct_out = nullptr) const;

    Gradients zero_gradients() const;

    // flat read/write access for optimizers, checkpoints and tests
    std::vector<std::vector<double>>& layer_weights() { return weights_; }
    std::vector<std::vector<double>>& layer_bias() { return bias_; }
    const std::vector<std::vector<double>>& layer_weights() const { return weights_; }
    const std::vector<std::vector<double>>& layer_bias() const { return bias_; }

    void save(const std::string& path) const;
    static Network load(const std::string& path);

private:
    friend struct NetworkOps;  // internal plan builder / forward implementation
    NetworkConfig cfg_;

    struct LayerPlan {
        enum Kind : std::uint8_t { Conv, Dense, Flatten } kind;
        Activation act = Activation::Linear;
        Shape3 in, out;
        int filters = 0, kernel = 0, stride = 0;  // conv only
        int weight_count = 0, bias_count = 0;
    };
    std::vector<LayerPlan> plan_;
    std::vector<std::vector<double>> weights_;
    std::vector<std::vector<double>> bias_;
};

struct TrainedNetwork {
    Network net;
    std::vector<EpochStats> history;
};

// Thrown when the loss goes non-finite; carries the offending epoch.
struct TrainingDiverged : std::runtime_error {
    int epoch;
    explicit TrainingDiverged(int epoch_);
};

// SGD with momentum over seeded per-epoch shuffles.
TrainedNetwork train(Network net, const LabeledDataset& data, const TrainConfig& tc);

// Fraction of examples whose argmax logit matches the dataset label.
double evaluate_accuracy(const Network& net, const LabeledDataset& data);

// Representations for every example of one label, rows aligned with
// `dataset_indices`. Extraction is batched; results are batching-invariant.
struct RepresentationMatrix {
    int label = 0;
    linalg::DenseMatrix rows;
    std::vector<int> dataset_indices;
};

RepresentationMatrix extract_representations(const Network& net, const LabeledDataset& data,
                                             int label, int batch = 64);

}  // namespace spectral::nnlab
