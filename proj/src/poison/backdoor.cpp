#include "spectral/poison/backdoor.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "spectral/rng.hpp"

namespace spectral::poison {

const char* mark_shape_name(MarkShape s) {
    switch (s) {
        case MarkShape::Pixel: return "PIXEL";
        case MarkShape::X: return "X";
        case MarkShape::L: return "L";
    }
    return "?";
}

MarkShape mark_shape_from_name(const std::string& name) {
    if (name == "PIXEL" || name == "pixel") return MarkShape::Pixel;
    if (name == "X" || name == "x") return MarkShape::X;
    if (name == "L" || name == "l") return MarkShape::L;
    throw std::invalid_argument("unknown backdoor shape '" + name + "'");
}

std::vector<std::pair<int, int>> mark_stencil(MarkShape shape) {
    switch (shape) {
        case MarkShape::Pixel:
            return {{0, 0}};
        case MarkShape::X:
            return {{0, 0}, {2, 0}, {1, 1}, {0, 2}, {2, 2}};
        case MarkShape::L:
            return {{0, 0}, {1, 0}, {2, 0}, {2, 1}, {2, 2}};
    }
    throw std::invalid_argument("unknown shape");
}

void BackdoorSpec::validate(int height, int width, int channels) const {
    if (attack_label == target_label)
        throw std::invalid_argument("backdoor: attack and target labels must differ");
    if (static_cast<int>(color.size()) != channels)
        throw std::invalid_argument("backdoor: color channel count mismatch");
    for (double c : color)
        if (!(c >= 0.0 && c <= 1.0))
            throw std::invalid_argument("backdoor: color outside [0, 1]");
    if (epsilon_count < 0) throw std::invalid_argument("backdoor: negative epsilon_count");
    for (const auto& [dr, dc] : mark_stencil(shape)) {
        const int r = row + dr, c = col + dc;
        if (r < 0 || r >= height || c < 0 || c >= width)
            throw std::invalid_argument("backdoor: mark does not fit inside the image");
    }
}

void apply_backdoor(std::span<double> image, int height, int width, int channels,
                    const BackdoorSpec& spec) {
    spec.validate(height, width, channels);
    for (const auto& [dr, dc] : mark_stencil(spec.shape)) {
        double* px = image.data() +
                     (static_cast<std::size_t>(spec.row + dr) * width + (spec.col + dc)) * channels;
        for (int ch = 0; ch < channels; ++ch) px[ch] = spec.color[ch];
    }
}

PoisonedDataset build_poisoned_dataset(const nnlab::LabeledDataset& base,
                                       const BackdoorSpec& spec, std::uint64_t seed) {
    spec.validate(base.height, base.width, base.channels);
    if (spec.target_label < 0 || spec.target_label >= base.num_classes ||
        spec.attack_label < 0 || spec.attack_label >= base.num_classes)
        throw std::invalid_argument("build_poisoned_dataset: label out of range");

    const auto attack_indices = base.indices_of_label(spec.attack_label);
    if (static_cast<int>(attack_indices.size()) < spec.epsilon_count)
        throw std::invalid_argument(
            "build_poisoned_dataset: not enough attack-label examples (" +
            std::to_string(attack_indices.size()) + " < " +
            std::to_string(spec.epsilon_count) + ")");

    Rng rng(splitmix64(seed));
    const auto picks = rng.sample_without_replacement(static_cast<int>(attack_indices.size()),
                                                      spec.epsilon_count);

    PoisonedDataset out;
    out.data = base;
    out.spec = spec;

    for (int p : picks) {
        const int src = attack_indices[p];
        if (spec.replace) {
            apply_backdoor(out.data.image(src), base.height, base.width, base.channels, spec);
            out.data.labels[src] = spec.target_label;
            out.data.provenance[src] = nnlab::Provenance::Poison;
            out.poisoned_indices.push_back(src);
        } else {
            std::vector<double> img(base.image(src).begin(), base.image(src).end());
            apply_backdoor(img, base.height, base.width, base.channels, spec);
            out.data.images.insert(out.data.images.end(), img.begin(), img.end());
            out.data.labels.push_back(spec.target_label);
            out.data.provenance.push_back(nnlab::Provenance::Poison);
            out.poisoned_indices.push_back(out.data.size() - 1);
        }
    }
    std::sort(out.poisoned_indices.begin(), out.poisoned_indices.end());
    return out;
}

nnlab::LabeledDataset build_poisoned_testset(const nnlab::LabeledDataset& clean_test,
                                             const BackdoorSpec& spec) {
    spec.validate(clean_test.height, clean_test.width, clean_test.channels);
    nnlab::LabeledDataset out;
    out.height = clean_test.height;
    out.width = clean_test.width;
    out.channels = clean_test.channels;
    out.num_classes = clean_test.num_classes;
    for (int i = 0; i < clean_test.size(); ++i) {
        if (clean_test.labels[i] != spec.attack_label) continue;
        std::vector<double> img(clean_test.image(i).begin(), clean_test.image(i).end());
        apply_backdoor(img, out.height, out.width, out.channels, spec);
        out.images.insert(out.images.end(), img.begin(), img.end());
        out.labels.push_back(spec.target_label);  // success = predicting the target
        out.provenance.push_back(nnlab::Provenance::Poison);
    }
    return out;
}

}  // namespace spectral::poison
