#include "spectral/nnlab/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "spectral/rng.hpp"

namespace spectral::nnlab {

namespace {

inline double activate(double z, Activation a) {
    return a == Activation::Relu ? (z > 0.0 ? z : 0.0) : z;
}

inline double activate_grad(double z, Activation a) {
    return a == Activation::Relu ? (z > 0.0 ? 1.0 : 0.0) : 1.0;
}

[[noreturn]] void reject_layer(int index, const std::string& why) {
    throw std::invalid_argument("network layer " + std::to_string(index) + ": " + why);
}

}  // namespace

TrainingDiverged::TrainingDiverged(int epoch_)
    : std::runtime_error("training diverged (non-finite loss) at epoch " +
                         std::to_string(epoch_)),
      epoch(epoch_) {}

struct NetworkWorkspace;

// Shared internals used by init, checkpoint loading and both passes.
struct NetworkOps {
    static void forward_batch(const Network& net, std::span<const double> batch, int n,
                              NetworkWorkspace& ws);

    static std::vector<Network::LayerPlan> build_plan(const NetworkConfig& cfg) {
        if (cfg.input.h < 1 || cfg.input.w < 1 || cfg.input.c < 1)
            throw std::invalid_argument("network: bad input shape");
        if (cfg.num_classes < 2) throw std::invalid_argument("network: need >= 2 classes");
        if (cfg.layers.empty()) throw std::invalid_argument("network: no layers");

        std::vector<Network::LayerPlan> plan;
        Shape3 shape = cfg.input;
        for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
            Network::LayerPlan lp;
            lp.in = shape;
            if (const auto* conv = std::get_if<ConvSpec>(&cfg.layers[i])) {
                if (conv->filters < 1 || conv->kernel < 1 || conv->stride < 1)
                    reject_layer(static_cast<int>(i), "bad conv parameters");
                if (shape.h < conv->kernel || shape.w < conv->kernel)
                    reject_layer(static_cast<int>(i), "kernel does not fit input");
                lp.kind = Network::LayerPlan::Conv;
                lp.act = conv->act;
                lp.filters = conv->filters;
                lp.kernel = conv->kernel;
                lp.stride = conv->stride;
                lp.out = {(shape.h - conv->kernel) / conv->stride + 1,
                          (shape.w - conv->kernel) / conv->stride + 1, conv->filters};
                lp.weight_count = conv->filters * conv->kernel * conv->kernel * shape.c;
                lp.bias_count = conv->filters;
            } else if (const auto* dense = std::get_if<DenseSpec>(&cfg.layers[i])) {
                if (dense->units < 1) reject_layer(static_cast<int>(i), "bad dense units");
                if (!shape.flat())
                    reject_layer(static_cast<int>(i), "dense layer requires flat input (add FLATTEN)");
                lp.kind = Network::LayerPlan::Dense;
                lp.act = dense->act;
                lp.out = {1, 1, dense->units};
                lp.weight_count = shape.size() * dense->units;
                lp.bias_count = dense->units;
            } else {
                lp.kind = Network::LayerPlan::Flatten;
                lp.act = Activation::Linear;
                lp.out = {1, 1, shape.size()};
            }
            shape = lp.out;
            plan.push_back(lp);
        }

        const auto& last = plan.back();
        if (last.kind != Network::LayerPlan::Dense || last.out.c != cfg.num_classes ||
            last.act != Activation::Linear)
            throw std::invalid_argument(
                "network: final layer must be DENSE(num_classes, linear)");
        if (cfg.representation_layer < 0 ||
            cfg.representation_layer >= static_cast<int>(plan.size()))
            throw std::invalid_argument("network: representation layer index out of range");
        if (!plan[cfg.representation_layer].out.flat())
            throw std::invalid_argument("network: representation layer output is not flat");
        return plan;
    }
};

Network Network::init(const NetworkConfig& cfg) {
    Network net;
    net.cfg_ = cfg;
    net.plan_ = NetworkOps::build_plan(cfg);
    net.weights_.resize(net.plan_.size());
    net.bias_.resize(net.plan_.size());

    Rng rng(splitmix64(cfg.seed));
    for (std::size_t l = 0; l < net.plan_.size(); ++l) {
        const auto& lp = net.plan_[l];
        net.weights_[l].assign(lp.weight_count, 0.0);
        net.bias_[l].assign(lp.bias_count, 0.0);
        if (lp.weight_count == 0) continue;
        int fan_in = 0, fan_out = 0;
        if (lp.kind == LayerPlan::Conv) {
            fan_in = lp.kernel * lp.kernel * lp.in.c;
            fan_out = lp.kernel * lp.kernel * lp.filters;
        } else {
            fan_in = lp.in.size();
            fan_out = lp.out.c;
        }
        const double bound = std::sqrt(6.0 / (fan_in + fan_out));
        for (double& w : net.weights_[l]) w = rng.uniform(-bound, bound);
    }
    return net;
}

int Network::representation_width() const {
    return plan_[cfg_.representation_layer].out.size();
}

int Network::parameter_count() const {
    int total = 0;
    for (std::size_t l = 0; l < plan_.size(); ++l)
        total += plan_[l].weight_count + plan_[l].bias_count;
    return total;
}

Gradients Network::zero_gradients() const {
    Gradients g;
    g.weights.resize(plan_.size());
    g.bias.resize(plan_.size());
    for (std::size_t l = 0; l < plan_.size(); ++l) {
        g.weights[l].assign(plan_[l].weight_count, 0.0);
        g.bias[l].assign(plan_[l].bias_count, 0.0);
    }
    return g;
}

// Per-layer pre-activations and activations for one batch.
struct NetworkWorkspace {
    std::vector<linalg::DenseMatrix> z;
    std::vector<linalg::DenseMatrix> a;
};

// Internal forward pass, filling z/a for every layer.
void NetworkOps::forward_batch(const Network& net, std::span<const double> batch, int n,
                               NetworkWorkspace& ws) {
    const NetworkConfig& cfg = net.cfg_;
    const auto& plan = net.plan_;
    const auto& weights = net.weights_;
    const auto& bias = net.bias_;
    const int in_size = cfg.input.size();
    if (batch.size() != static_cast<std::size_t>(n) * in_size)
        throw std::invalid_argument("forward: batch size does not match input shape");

    ws.z.assign(plan.size(), {});
    ws.a.assign(plan.size(), {});

    const double* input = batch.data();
    int input_width = in_size;

    for (std::size_t l = 0; l < plan.size(); ++l) {
        const auto& lp = plan[l];
        const int out_size = lp.out.size();
        ws.z[l] = linalg::DenseMatrix(n, out_size);
        ws.a[l] = linalg::DenseMatrix(n, out_size);
        const double* w = weights[l].data();
        const double* b = bias[l].data();

        if (lp.kind == Network::LayerPlan::Conv) {
            const int iw = lp.in.w, ic = lp.in.c;
            const int oh = lp.out.h, ow = lp.out.w, F = lp.filters;
            const int K = lp.kernel, S = lp.stride;
#pragma omp parallel for schedule(static)
            for (int e = 0; e < n; ++e) {
                const double* x = input + static_cast<std::size_t>(e) * input_width;
                double* ze = ws.z[l].data.data() + static_cast<std::size_t>(e) * out_size;
                double* ae = ws.a[l].data.data() + static_cast<std::size_t>(e) * out_size;
                for (int oy = 0; oy < oh; ++oy) {
                    for (int ox = 0; ox < ow; ++ox) {
                        double* zp = ze + (static_cast<std::size_t>(oy) * ow + ox) * F;
                        for (int f = 0; f < F; ++f) {
                            double acc = b[f];
                            const double* wf = w + static_cast<std::size_t>(f) * K * K * ic;
                            for (int ky = 0; ky < K; ++ky) {
                                const double* xrow =
                                    x + (static_cast<std::size_t>(oy * S + ky) * iw + ox * S) * ic;
                                const double* wrow = wf + static_cast<std::size_t>(ky) * K * ic;
                                for (int t = 0; t < K * ic; ++t) acc += wrow[t] * xrow[t];
                            }
                            zp[f] = acc;
                        }
                        for (int f = 0; f < F; ++f)
                            ae[(static_cast<std::size_t>(oy) * ow + ox) * F + f] =
                                activate(zp[f], lp.act);
                    }
                }
            }
        } else if (lp.kind == Network::LayerPlan::Dense) {
            const int in_sz = lp.in.size(), out_sz = lp.out.c;
#pragma omp parallel for schedule(static)
            for (int e = 0; e < n; ++e) {
                const double* x = input + static_cast<std::size_t>(e) * input_width;
                double* ze = ws.z[l].data.data() + static_cast<std::size_t>(e) * out_sz;
                double* ae = ws.a[l].data.data() + static_cast<std::size_t>(e) * out_sz;
                for (int j = 0; j < out_sz; ++j) ze[j] = b[j];
                for (int i = 0; i < in_sz; ++i) {
                    const double xi = x[i];
                    const double* wrow = w + static_cast<std::size_t>(i) * out_sz;
                    for (int j = 0; j < out_sz; ++j) ze[j] += xi * wrow[j];
                }
                for (int j = 0; j < out_sz; ++j) ae[j] = activate(ze[j], lp.act);
            }
        } else {  // Flatten
            std::memcpy(ws.z[l].data.data(), input,
                        static_cast<std::size_t>(n) * out_size * sizeof(double));
            ws.a[l].data = ws.z[l].data;
        }

        input = ws.a[l].data.data();
        input_width = out_size;
    }
}

Network::ForwardResult Network::forward(std::span<const double> batch, int n) const {
    NetworkWorkspace ws;
    NetworkOps::forward_batch(*this, batch, n, ws);
    ForwardResult out;
    out.logits = ws.a.back();
    out.representations = ws.a[cfg_.representation_layer];
    return out;
}

double Network::loss_and_gradients(std::span<const double> batch, int n,
                                   std::span<const int> labels, Gradients& grads,
                                   int* correct_out) const {
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("loss_and_gradients: labels/batch mismatch");
    for (int l : labels)
        if (l < 0 || l >= cfg_.num_classes)
            throw std::invalid_argument("loss_and_gradients: label out of range");

    NetworkWorkspace ws;
    NetworkOps::forward_batch(*this, batch, n, ws);

    if (grads.weights.size() != plan_.size()) grads = zero_gradients();
    for (std::size_t l = 0; l < plan_.size(); ++l) {
        grads.weights[l].assign(plan_[l].weight_count, 0.0);
        grads.bias[l].assign(plan_[l].bias_count, 0.0);
    }

    const int L = static_cast<int>(plan_.size());
    const int classes = cfg_.num_classes;

    // softmax cross-entropy; d_out holds dL/d(activation) for the current layer
    linalg::DenseMatrix d_out(n, classes);
    double loss = 0.0;
    int correct = 0;
    const auto& logits = ws.a[L - 1];
    for (int e = 0; e < n; ++e) {
        const double* ze = logits.data.data() + static_cast<std::size_t>(e) * classes;
        double* de = d_out.data.data() + static_cast<std::size_t>(e) * classes;
        int best = 0;
        double zmax = ze[0];
        for (int j = 1; j < classes; ++j)
            if (ze[j] > zmax) {
                zmax = ze[j];
                best = j;
            }
        if (best == labels[e]) ++correct;
        double sum = 0.0;
        for (int j = 0; j < classes; ++j) {
            de[j] = std::exp(ze[j] - zmax);
            sum += de[j];
        }
        for (int j = 0; j < classes; ++j) de[j] /= sum;
        // log(0) = -inf is intentional: a fully collapsed softmax is a
        // divergence signal the training loop must see
        loss -= std::log(de[labels[e]]);
        de[labels[e]] -= 1.0;
        for (int j = 0; j < classes; ++j) de[j] /= n;
    }
    loss /= n;
    if (correct_out) *correct_out = correct;

    for (int l = L - 1; l >= 0; --l) {
        const auto& lp = plan_[l];
        const int out_size = lp.out.size();
        const int in_size = lp.in.size();
        const double* a_in = (l == 0) ? batch.data() : ws.a[l - 1].data.data();

        // dZ = dA (.) act'(z)
        linalg::DenseMatrix dz(n, out_size);
        {
            const auto& z = ws.z[l];
#pragma omp parallel for schedule(static)
            for (int e = 0; e < n; ++e) {
                const double* zr = z.data.data() + static_cast<std::size_t>(e) * out_size;
                const double* dr = d_out.data.data() + static_cast<std::size_t>(e) * out_size;
                double* dzr = dz.data.data() + static_cast<std::size_t>(e) * out_size;
                for (int j = 0; j < out_size; ++j) dzr[j] = dr[j] * activate_grad(zr[j], lp.act);
            }
        }

        linalg::DenseMatrix d_in(n, in_size);

        if (lp.kind == LayerPlan::Dense) {
            double* gw = grads.weights[l].data();
            double* gb = grads.bias[l].data();
            const double* w = weights_[l].data();
            const int out_sz = lp.out.c;
            // dW rows are independent; each row sums over examples in order
#pragma omp parallel for schedule(static)
            for (int i = 0; i < in_size; ++i) {
                double* grow = gw + static_cast<std::size_t>(i) * out_sz;
                for (int e = 0; e < n; ++e) {
                    const double xi = a_in[static_cast<std::size_t>(e) * in_size + i];
                    const double* dzr = dz.data.data() + static_cast<std::size_t>(e) * out_sz;
                    for (int j = 0; j < out_sz; ++j) grow[j] += xi * dzr[j];
                }
            }
            for (int e = 0; e < n; ++e) {
                const double* dzr = dz.data.data() + static_cast<std::size_t>(e) * out_sz;
                for (int j = 0; j < out_sz; ++j) gb[j] += dzr[j];
            }
#pragma omp parallel for schedule(static)
            for (int e = 0; e < n; ++e) {
                const double* dzr = dz.data.data() + static_cast<std::size_t>(e) * out_sz;
                double* dir = d_in.data.data() + static_cast<std::size_t>(e) * in_size;
                for (int i = 0; i < in_size; ++i) {
                    const double* wrow = w + static_cast<std::size_t>(i) * out_sz;
                    double acc = 0.0;
                    for (int j = 0; j < out_sz; ++j) acc += wrow[j] * dzr[j];
                    dir[i] = acc;
                }
            }
        } else if (lp.kind == LayerPlan::Conv) {
            const int iw = lp.in.w, ic = lp.in.c;
            const int oh = lp.out.h, ow = lp.out.w, F = lp.filters;
            const int K = lp.kernel, S = lp.stride;
            double* gw = grads.weights[l].data();
            double* gb = grads.bias[l].data();
            const double* w = weights_[l].data();

            // each filter's weight/bias gradients are owned by one thread
#pragma omp parallel for schedule(static)
            for (int f = 0; f < F; ++f) {
                double* gwf = gw + static_cast<std::size_t>(f) * K * K * ic;
                double gbf = 0.0;
                for (int e = 0; e < n; ++e) {
                    const double* x = a_in + static_cast<std::size_t>(e) * in_size;
                    const double* dze = dz.data.data() + static_cast<std::size_t>(e) * out_size;
                    for (int oy = 0; oy < oh; ++oy) {
                        for (int ox = 0; ox < ow; ++ox) {
                            const double g = dze[(static_cast<std::size_t>(oy) * ow + ox) * F + f];
                            if (g == 0.0) continue;
                            gbf += g;
                            for (int ky = 0; ky < K; ++ky) {
                                const double* xrow =
                                    x + (static_cast<std::size_t>(oy * S + ky) * iw + ox * S) * ic;
                                double* grow = gwf + static_cast<std::size_t>(ky) * K * ic;
                                for (int t = 0; t < K * ic; ++t) grow[t] += g * xrow[t];
                            }
                        }
                    }
                }
                gb[f] = gbf;
            }

#pragma omp parallel for schedule(static)
            for (int e = 0; e < n; ++e) {
                double* dir = d_in.data.data() + static_cast<std::size_t>(e) * in_size;
                const double* dze = dz.data.data() + static_cast<std::size_t>(e) * out_size;
                for (int oy = 0; oy < oh; ++oy) {
                    for (int ox = 0; ox < ow; ++ox) {
                        const double* dzp = dze + (static_cast<std::size_t>(oy) * ow + ox) * F;
                        for (int f = 0; f < F; ++f) {
                            const double g = dzp[f];
                            if (g == 0.0) continue;
                            const double* wf = w + static_cast<std::size_t>(f) * K * K * ic;
                            for (int ky = 0; ky < K; ++ky) {
                                double* drow =
                                    dir + (static_cast<std::size_t>(oy * S + ky) * iw + ox * S) * ic;
                                const double* wrow = wf + static_cast<std::size_t>(ky) * K * ic;
                                for (int t = 0; t < K * ic; ++t) drow[t] += g * wrow[t];
                            }
                        }
                    }
                }
            }
        } else {  // Flatten: gradient passes through unchanged
            d_in.data = std::move(dz.data);
        }

        d_out = std::move(d_in);
    }
    return loss;
}

TrainedNetwork train(Network net, const LabeledDataset& data, const TrainConfig& tc) {
    if (data.size() == 0) throw std::invalid_argument("train: empty dataset");
    if (tc.batch_size < 1) throw std::invalid_argument("train: batch_size must be >= 1");
    if (tc.learning_rate < 0.0) throw std::invalid_argument("train: negative learning rate");
    if (tc.momentum < 0.0 || tc.momentum >= 1.0)
        throw std::invalid_argument("train: momentum must be in [0, 1)");
    if (data.num_classes != net.config().num_classes)
        throw std::invalid_argument("train: dataset/network class count mismatch");

    const int n = data.size();
    const int esz = data.example_size();
    Gradients grads = net.zero_gradients();
    Gradients vel = net.zero_gradients();
    double lr = tc.learning_rate;

    TrainedNetwork out;
    std::vector<int> perm(n);
    std::vector<double> batch_images;
    std::vector<int> batch_labels;

    for (int epoch = 0; epoch < tc.epochs; ++epoch) {
        for (const auto& [at, factor] : tc.lr_decay)
            if (at == epoch) lr *= factor;

        std::iota(perm.begin(), perm.end(), 0);
        Rng shuffle_rng(derive_seed(tc.seed, static_cast<std::uint64_t>(epoch)));
        shuffle_rng.shuffle(perm);

        double loss_sum = 0.0;
        int correct = 0;
        for (int start = 0; start < n; start += tc.batch_size) {
            const int bn = std::min(tc.batch_size, n - start);
            batch_images.resize(static_cast<std::size_t>(bn) * esz);
            batch_labels.resize(bn);
            for (int b = 0; b < bn; ++b) {
                const int src = perm[start + b];
                std::memcpy(batch_images.data() + static_cast<std::size_t>(b) * esz,
                            data.images.data() + static_cast<std::size_t>(src) * esz,
                            static_cast<std::size_t>(esz) * sizeof(double));
                batch_labels[b] = data.labels[src];
            }

            int batch_correct = 0;
            const double loss =
                net.loss_and_gradients(batch_images, bn, batch_labels, grads, &batch_correct);
            if (!std::isfinite(loss)) throw TrainingDiverged(epoch);
            loss_sum += loss * bn;
            correct += batch_correct;  // pre-update logits

            for (std::size_t l = 0; l < vel.weights.size(); ++l) {
                auto& w = net.layer_weights()[l];
                auto& bi = net.layer_bias()[l];
                for (std::size_t i = 0; i < w.size(); ++i) {
                    vel.weights[l][i] = tc.momentum * vel.weights[l][i] - lr * grads.weights[l][i];
                    w[i] += vel.weights[l][i];
                }
                for (std::size_t i = 0; i < bi.size(); ++i) {
                    vel.bias[l][i] = tc.momentum * vel.bias[l][i] - lr * grads.bias[l][i];
                    bi[i] += vel.bias[l][i];
                }
            }
        }
        out.history.push_back({loss_sum / n, static_cast<double>(correct) / n});
    }
    out.net = std::move(net);
    return out;
}

double evaluate_accuracy(const Network& net, const LabeledDataset& data) {
    const int n = data.size();
    if (n == 0) throw std::invalid_argument("evaluate_accuracy: empty dataset");
    const int esz = data.example_size();
    const int chunk = 256;
    int correct = 0;
    for (int start = 0; start < n; start += chunk) {
        const int bn = std::min(chunk, n - start);
        std::span<const double> block(data.images.data() + static_cast<std::size_t>(start) * esz,
                                      static_cast<std::size_t>(bn) * esz);
        auto logits = net.forward(block, bn).logits;
        for (int b = 0; b < bn; ++b) {
            int best = 0;
            for (int j = 1; j < logits.cols; ++j)
                if (logits.at(b, j) > logits.at(b, best)) best = j;
            if (best == data.labels[start + b]) ++correct;
        }
    }
    return static_cast<double>(correct) / n;
}

RepresentationMatrix extract_representations(const Network& net, const LabeledDataset& data,
                                             int label, int batch) {
    if (label < 0 || label >= data.num_classes)
        throw std::invalid_argument("extract_representations: label out of range");
    auto idx = data.indices_of_label(label);
    if (idx.empty())
        throw std::invalid_argument("extract_representations: label has no examples");
    if (batch < 1) batch = 1;

    const int esz = data.example_size();
    const int width = net.representation_width();
    RepresentationMatrix out;
    out.label = label;
    out.dataset_indices = idx;
    out.rows = linalg::DenseMatrix(static_cast<int>(idx.size()), width);

    std::vector<double> buf;
    for (std::size_t start = 0; start < idx.size(); start += batch) {
        const int bn = static_cast<int>(std::min<std::size_t>(batch, idx.size() - start));
        buf.resize(static_cast<std::size_t>(bn) * esz);
        for (int b = 0; b < bn; ++b)
            std::memcpy(buf.data() + static_cast<std::size_t>(b) * esz,
                        data.images.data() + static_cast<std::size_t>(idx[start + b]) * esz,
                        static_cast<std::size_t>(esz) * sizeof(double));
        auto reps = net.forward(buf, bn).representations;
        for (int b = 0; b < bn; ++b)
            std::memcpy(out.rows.data.data() + (start + b) * width,
                        reps.data.data() + static_cast<std::size_t>(b) * width,
                        static_cast<std::size_t>(width) * sizeof(double));
    }
    return out;
}

// ---------------------------------------------------------------------------
// checkpoint format: "SPNC" + version, config block, then raw weight arrays
// ---------------------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'S', 'P', 'N', 'C'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_pod(std::ostream& out, const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

}  // namespace

void Network::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("Network::save: cannot open " + path);
    out.write(kMagic, 4);
    write_pod(out, kVersion);
    write_pod(out, static_cast<std::int32_t>(cfg_.input.h));
    write_pod(out, static_cast<std::int32_t>(cfg_.input.w));
    write_pod(out, static_cast<std::int32_t>(cfg_.input.c));
    write_pod(out, static_cast<std::int32_t>(cfg_.num_classes));
    write_pod(out, static_cast<std::int32_t>(cfg_.representation_layer));
    write_pod(out, static_cast<std::uint64_t>(cfg_.seed));
    write_pod(out, static_cast<std::int32_t>(cfg_.layers.size()));
    for (const auto& spec : cfg_.layers) {
        if (const auto* conv = std::get_if<ConvSpec>(&spec)) {
            write_pod(out, static_cast<std::uint8_t>(0));
            write_pod(out, static_cast<std::uint8_t>(conv->act));
            write_pod(out, static_cast<std::int32_t>(conv->filters));
            write_pod(out, static_cast<std::int32_t>(conv->kernel));
            write_pod(out, static_cast<std::int32_t>(conv->stride));
        } else if (const auto* dense = std::get_if<DenseSpec>(&spec)) {
            write_pod(out, static_cast<std::uint8_t>(1));
            write_pod(out, static_cast<std::uint8_t>(dense->act));
            write_pod(out, static_cast<std::int32_t>(dense->units));
        } else {
            write_pod(out, static_cast<std::uint8_t>(2));
        }
    }
    for (std::size_t l = 0; l < weights_.size(); ++l) {
        write_pod(out, static_cast<std::uint64_t>(weights_[l].size()));
        out.write(reinterpret_cast<const char*>(weights_[l].data()),
                  static_cast<std::streamsize>(weights_[l].size() * sizeof(double)));
        write_pod(out, static_cast<std::uint64_t>(bias_[l].size()));
        out.write(reinterpret_cast<const char*>(bias_[l].data()),
                  static_cast<std::streamsize>(bias_[l].size() * sizeof(double)));
    }
}

Network Network::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("Network::load: cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("Network::load: not a checkpoint file");
    if (read_pod<std::uint32_t>(in) != kVersion)
        throw std::runtime_error("Network::load: unsupported version");

    NetworkConfig cfg;
    cfg.input.h = read_pod<std::int32_t>(in);
    cfg.input.w = read_pod<std::int32_t>(in);
    cfg.input.c = read_pod<std::int32_t>(in);
    cfg.num_classes = read_pod<std::int32_t>(in);
    cfg.representation_layer = read_pod<std::int32_t>(in);
    cfg.seed = read_pod<std::uint64_t>(in);
    const int nlayers = read_pod<std::int32_t>(in);
    for (int l = 0; l < nlayers; ++l) {
        const auto kind = read_pod<std::uint8_t>(in);
        if (kind == 0) {
            ConvSpec c;
            c.act = static_cast<Activation>(read_pod<std::uint8_t>(in));
            c.filters = read_pod<std::int32_t>(in);
            c.kernel = read_pod<std::int32_t>(in);
            c.stride = read_pod<std::int32_t>(in);
            cfg.layers.emplace_back(c);
        } else if (kind == 1) {
            DenseSpec d;
            d.act = static_cast<Activation>(read_pod<std::uint8_t>(in));
            d.units = read_pod<std::int32_t>(in);
            cfg.layers.emplace_back(d);
        } else if (kind == 2) {
            cfg.layers.emplace_back(FlattenSpec{});
        } else {
            throw std::runtime_error("Network::load: unknown layer kind");
        }
    }

    Network net;
    net.cfg_ = cfg;
    net.plan_ = NetworkOps::build_plan(cfg);
    net.weights_.resize(net.plan_.size());
    net.bias_.resize(net.plan_.size());
    for (std::size_t l = 0; l < net.plan_.size(); ++l) {
        const auto wn = read_pod<std::uint64_t>(in);
        if (wn != static_cast<std::uint64_t>(net.plan_[l].weight_count))
            throw std::runtime_error("Network::load: weight block size mismatch");
        net.weights_[l].resize(wn);
        in.read(reinterpret_cast<char*>(net.weights_[l].data()),
                static_cast<std::streamsize>(wn * sizeof(double)));
        const auto bn = read_pod<std::uint64_t>(in);
        if (bn != static_cast<std::uint64_t>(net.plan_[l].bias_count))
            throw std::runtime_error("Network::load: bias block size mismatch");
        net.bias_[l].resize(bn);
        in.read(reinterpret_cast<char*>(net.bias_[l].data()),
                static_cast<std::streamsize>(bn * sizeof(double)));
        if (!in) throw std::runtime_error("Network::load: truncated weights");
    }
    return net;
}

}  // namespace spectral::nnlab
