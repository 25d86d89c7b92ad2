#pragma once

// Test-only scalar re-implementation of the forward pass. Written against the
// documented layouts only (weights [f][ky][kx][ci] / [in][out], activations
// (h, w, c) with c fastest); shares no code with the library path it checks.

#include <cmath>
#include <vector>

#include "spectral/nnlab/network.hpp"

namespace naive {

struct Tensor {
    int h = 1, w = 1, c = 1;
    std::vector<double> v;
    double get(int y, int x, int ch) const { return v[(y * w + x) * c + ch]; }
};

inline double act(double z, spectral::nnlab::Activation a) {
    if (a == spectral::nnlab::Activation::Relu) return z > 0 ? z : 0.0;
    return z;
}

struct LayerValues {
    Tensor pre;   // pre-activations
    Tensor post;  // after the activation function
};

// Returns pre- and post-activation values of every layer for one example.
inline std::vector<LayerValues> forward_one(const spectral::nnlab::Network& net,
                                            const std::vector<double>& image) {
    using namespace spectral::nnlab;
    const auto& cfg = net.config();
    std::vector<LayerValues> out;
    Tensor cur{cfg.input.h, cfg.input.w, cfg.input.c, image};
    for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
        const auto& weights = net.layer_weights()[l];
        const auto& bias = net.layer_bias()[l];
        LayerValues lv;
        Tensor& pre = lv.pre;
        if (const auto* conv = std::get_if<ConvSpec>(&cfg.layers[l])) {
            const int K = conv->kernel, S = conv->stride, F = conv->filters;
            pre.h = (cur.h - K) / S + 1;
            pre.w = (cur.w - K) / S + 1;
            pre.c = F;
            pre.v.assign(static_cast<std::size_t>(pre.h) * pre.w * pre.c, 0.0);
            for (int oy = 0; oy < pre.h; ++oy)
                for (int ox = 0; ox < pre.w; ++ox)
                    for (int f = 0; f < F; ++f) {
                        double z = bias[f];
                        for (int ky = 0; ky < K; ++ky)
                            for (int kx = 0; kx < K; ++kx)
                                for (int ci = 0; ci < cur.c; ++ci)
                                    z += weights[((f * K + ky) * K + kx) * cur.c + ci] *
                                         cur.get(oy * S + ky, ox * S + kx, ci);
                        pre.v[(oy * pre.w + ox) * F + f] = z;
                    }
            lv.post = pre;
            for (double& v : lv.post.v) v = act(v, conv->act);
        } else if (const auto* dense = std::get_if<DenseSpec>(&cfg.layers[l])) {
            const int in = cur.h * cur.w * cur.c;
            pre.h = pre.w = 1;
            pre.c = dense->units;
            pre.v.assign(dense->units, 0.0);
            for (int j = 0; j < dense->units; ++j) {
                double z = bias[j];
                for (int i = 0; i < in; ++i) z += weights[i * dense->units + j] * cur.v[i];
                pre.v[j] = z;
            }
            lv.post = pre;
            for (double& v : lv.post.v) v = act(v, dense->act);
        } else {
            pre.h = pre.w = 1;
            pre.c = cur.h * cur.w * cur.c;
            pre.v = cur.v;
            lv.post = pre;
        }
        out.push_back(lv);
        cur = out.back().post;
    }
    return out;
}

}  // namespace naive
