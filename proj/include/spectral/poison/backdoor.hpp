#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "spectral/nnlab/dataset.hpp"

namespace spectral::poison {

enum class MarkShape : std::uint8_t { Pixel, X, L };

const char* mark_shape_name(MarkShape s);
MarkShape mark_shape_from_name(const std::string& name);

// Pixel offsets of each mark relative to its anchor (row, col). X and L are
// 3x3 stencils with 5 set pixels; PIXEL sets one.
std::vector<std::pair<int, int>> mark_stencil(MarkShape shape);

struct BackdoorSpec {
    MarkShape shape = MarkShape::Pixel;
    int row = 0;
    int col = 0;
    std::vector<double> color;  // one value per channel, in [0, 1]
    int attack_label = 0;
    int target_label = 1;
    int epsilon_count = 0;

    // add semantics keeps the originals; replace overwrites them in place
    bool replace = false;

    void validate(int height, int width, int channels) const;
};

// Overwrites exactly the stencil's pixels with spec.color; idempotent.
void apply_backdoor(std::span<double> image, int height, int width, int channels,
                    const BackdoorSpec& spec);

struct PoisonedDataset {
    nnlab::LabeledDataset data;
    BackdoorSpec spec;
    std::vector<int> poisoned_indices;  // positions in `data`, sorted
};

// Samples epsilon_count attack-label examples without replacement (seeded),
// marks them, relabels them to the target and appends them; the originals
// stay untouched. With spec.replace the marked copies overwrite the
// originals instead.
PoisonedDataset build_poisoned_dataset(const nnlab::LabeledDataset& base,
                                       const BackdoorSpec& spec, std::uint64_t seed);

// Marks every attack-label test image; the evaluation target of each becomes
// target_label, so accuracy on the result is the attack success rate.
nnlab::LabeledDataset build_poisoned_testset(const nnlab::LabeledDataset& clean_test,
                                             const BackdoorSpec& spec);

}  // namespace spectral::poison
