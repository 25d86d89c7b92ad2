#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "spectral/nnlab/dataset.hpp"

namespace spectral::poison {

// Desk-scale synthetic image classes: one fixed smooth random template per
// class, examples are clip(class_signal * template + N(0, noise^2)).
struct ToyConfig {
    int num_classes = 4;
    int per_class = 500;
    int height = 16;
    int width = 16;
    int channels = 1;
    double class_signal = 0.3;
    double noise = 0.3;

    // Optional per-example smooth nuisance field (low-frequency, range
    // +-nuisance) added to every pixel before clipping; stands in for the
    // structured background/illumination variance of natural images.
    // 0 disables it.
    double nuisance = 0.0;

    std::uint64_t seed = 0;

    // Offsets the per-example noise stream only; templates depend on `seed`
    // alone, so split 0 (train) and split 1 (test) share class templates.
    std::uint64_t noise_stream = 0;
};

// Templates are redrawn (up to 1000 attempts each) until every pair satisfies
// ||t_i - t_j||_2 >= 0.5 * class_signal * sqrt(h*w*c) after scaling; failure
// to satisfy the spread is an error.
std::vector<std::vector<double>> class_templates(const ToyConfig& cfg);

nnlab::LabeledDataset generate_toy_dataset(const ToyConfig& cfg);

// Relabels every example of `labels_to_merge` to new_label (which must be one
// of them) and compacts the label space; provenance is preserved.
nnlab::LabeledDataset merge_labels(const nnlab::LabeledDataset& data,
                                   const std::set<int>& labels_to_merge, int new_label);

}  // namespace spectral::poison
