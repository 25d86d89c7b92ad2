#include "spectral/poison/toygen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral/rng.hpp"

namespace spectral::poison {

namespace {

constexpr int kControlGrid = 4;  // low-res control points per axis
constexpr std::uint64_t kTemplateStream = 0x7e3a;
constexpr std::uint64_t kExampleStream = 0xe6a3;

// Bilinear upsample of a random control grid: one smooth random field in
// roughly [0, 1].
std::vector<double> raw_smooth_field(int h, int w, int c, Rng& rng) {
    std::vector<double> grid(kControlGrid * kControlGrid * c);
    for (double& g : grid) g = rng.uniform01();

    std::vector<double> field(static_cast<std::size_t>(h) * w * c);
    for (int y = 0; y < h; ++y) {
        const double gy = (h == 1) ? 0.0 : static_cast<double>(y) / (h - 1) * (kControlGrid - 1);
        const int y0 = std::min(static_cast<int>(gy), kControlGrid - 2);
        const double fy = gy - y0;
        for (int x = 0; x < w; ++x) {
            const double gx =
                (w == 1) ? 0.0 : static_cast<double>(x) / (w - 1) * (kControlGrid - 1);
            const int x0 = std::min(static_cast<int>(gx), kControlGrid - 2);
            const double fx = gx - x0;
            for (int ch = 0; ch < c; ++ch) {
                auto at = [&](int yy, int xx) {
                    return grid[(yy * kControlGrid + xx) * c + ch];
                };
                const double v = (1 - fy) * ((1 - fx) * at(y0, x0) + fx * at(y0, x0 + 1)) +
                                 fy * ((1 - fx) * at(y0 + 1, x0) + fx * at(y0 + 1, x0 + 1));
                field[(static_cast<std::size_t>(y) * w + x) * c + ch] = v;
            }
        }
    }

    return field;
}

// Class template: a smooth field, min-max normalized and contrast-stretched
// so templates occupy distinct blobby regions instead of hovering around
// mid-grey.
std::vector<double> template_field(int h, int w, int c, Rng& rng) {
    auto field = raw_smooth_field(h, w, c, rng);
    double lo = field[0], hi = field[0];
    for (double v : field) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double span = hi > lo ? hi - lo : 1.0;
    for (double& v : field) {
        const double t = (v - lo) / span;
        v = std::clamp(0.5 + 2.5 * (t - 0.5), 0.0, 1.0);  // contrast stretch
    }
    return field;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

std::vector<std::vector<double>> class_templates(const ToyConfig& cfg) {
    if (cfg.num_classes < 1 || cfg.per_class < 1)
        throw std::invalid_argument("toy dataset: need at least one class and one example");
    if (cfg.class_signal <= 0.0) throw std::invalid_argument("toy dataset: class_signal <= 0");

    Rng rng(derive_seed(cfg.seed, kTemplateStream));
    const double need = 0.5 * cfg.class_signal *
                        std::sqrt(static_cast<double>(cfg.height) * cfg.width * cfg.channels);
    std::vector<std::vector<double>> templates;
    for (int k = 0; k < cfg.num_classes; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            auto cand = template_field(cfg.height, cfg.width, cfg.channels, rng);
            placed = true;
            for (const auto& t : templates)
                if (distance(cand, t) < need) {
                    placed = false;
                    break;
                }
            if (placed) templates.push_back(std::move(cand));
        }
        if (!placed)
            throw std::runtime_error(
                "toy dataset: could not draw class-distinguishable templates "
                "(1000 attempts exhausted)");
    }
    return templates;
}

nnlab::LabeledDataset generate_toy_dataset(const ToyConfig& cfg) {
    const auto templates = class_templates(cfg);

    nnlab::LabeledDataset data;
    data.height = cfg.height;
    data.width = cfg.width;
    data.channels = cfg.channels;
    data.num_classes = cfg.num_classes;
    const int esz = data.example_size();
    data.images.reserve(static_cast<std::size_t>(cfg.num_classes) * cfg.per_class * esz);

    Rng rng(derive_seed(derive_seed(cfg.seed, kExampleStream), cfg.noise_stream));
    std::vector<double> field;
    for (int k = 0; k < cfg.num_classes; ++k) {
        for (int i = 0; i < cfg.per_class; ++i) {
            if (cfg.nuisance > 0.0)
                field = raw_smooth_field(cfg.height, cfg.width, cfg.channels, rng);
            for (int p = 0; p < esz; ++p) {
                double v = cfg.class_signal * templates[k][p] + cfg.noise * rng.normal();
                if (cfg.nuisance > 0.0) v += cfg.nuisance * 2.0 * (field[p] - 0.5);
                data.images.push_back(std::clamp(v, 0.0, 1.0));
            }
            data.labels.push_back(k);
            data.provenance.push_back(nnlab::Provenance::Clean);
        }
    }
    return data;
}

nnlab::LabeledDataset merge_labels(const nnlab::LabeledDataset& data,
                                   const std::set<int>& labels_to_merge, int new_label) {
    if (labels_to_merge.empty()) throw std::invalid_argument("merge_labels: empty merge set");
    for (int l : labels_to_merge)
        if (l < 0 || l >= data.num_classes)
            throw std::invalid_argument("merge_labels: label out of range");
    if (labels_to_merge.count(new_label) == 0)
        throw std::invalid_argument("merge_labels: new_label must be one of the merged labels");

    nnlab::LabeledDataset out = data;
    for (int& l : out.labels)
        if (labels_to_merge.count(l)) l = new_label;

    // compact the surviving label values to 0..k-1 in order
    std::set<int> survivors(out.labels.begin(), out.labels.end());
    std::vector<int> remap(data.num_classes, -1);
    int next = 0;
    for (int s : survivors) remap[s] = next++;
    for (int& l : out.labels) l = remap[l];
    out.num_classes = next;
    return out;
}

}  // namespace spectral::poison
