#include "doctest.h"

#include <cmath>

#include "spectral/nnlab/network.hpp"
#include "spectral/poison/backdoor.hpp"
#include "spectral/poison/toygen.hpp"
#include "spectral/rng.hpp"

using namespace spectral;
using namespace spectral::poison;
using nnlab::LabeledDataset;
using nnlab::Provenance;

namespace {

LabeledDataset black_dataset(int n_per_class, int classes, int hw = 32) {
    LabeledDataset d;
    d.height = hw;
    d.width = hw;
    d.channels = 1;
    d.num_classes = classes;
    for (int k = 0; k < classes; ++k)
        for (int i = 0; i < n_per_class; ++i) {
            d.images.insert(d.images.end(), static_cast<std::size_t>(hw) * hw, 0.0);
            d.labels.push_back(k);
            d.provenance.push_back(Provenance::Clean);
        }
    return d;
}

BackdoorSpec grey_pixel_spec(int row, int col) {
    BackdoorSpec s;
    s.shape = MarkShape::Pixel;
    s.row = row;
    s.col = col;
    s.color = {0.5};
    s.attack_label = 0;
    s.target_label = 1;
    s.epsilon_count = 0;
    return s;
}

int count_diffs(std::span<const double> a, std::span<const double> b) {
    int c = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++c;
    return c;
}

}  // namespace

TEST_CASE("apply_backdoor touches exactly the stencil pixels") {
    auto base = black_dataset(1, 2);
    auto spec = grey_pixel_spec(30, 30);
    std::vector<double> img(base.image(0).begin(), base.image(0).end());
    apply_backdoor(img, 32, 32, 1, spec);
    CHECK(count_diffs(img, base.image(0)) == 1);
    CHECK(img[30 * 32 + 30] == 0.5);

    // X and L change 5 pixels each
    for (auto shape : {MarkShape::X, MarkShape::L}) {
        spec.shape = shape;
        spec.row = 10;
        spec.col = 10;
        std::vector<double> marked(base.image(0).begin(), base.image(0).end());
        apply_backdoor(marked, 32, 32, 1, spec);
        CHECK(count_diffs(marked, base.image(0)) == 5);
    }
}

TEST_CASE("apply_backdoor is idempotent and can be a no-op") {
    auto spec = grey_pixel_spec(4, 7);
    spec.shape = MarkShape::X;
    spec.row = 1;
    spec.col = 1;
    std::vector<double> img(9 * 9, 0.3);
    apply_backdoor(img, 9, 9, 1, spec);
    auto once = img;
    apply_backdoor(img, 9, 9, 1, spec);
    CHECK(img == once);

    // white X on an all-white image changes nothing
    std::vector<double> white(9 * 9, 1.0);
    spec.color = {1.0};
    auto before = white;
    apply_backdoor(white, 9, 9, 1, spec);
    CHECK(white == before);
}

TEST_CASE("apply_backdoor rejects out-of-bounds placement") {
    auto spec = grey_pixel_spec(31, 31);
    spec.shape = MarkShape::X;  // 3x3 stencil sticks out
    std::vector<double> img(32 * 32, 0.0);
    CHECK_THROWS_AS(apply_backdoor(img, 32, 32, 1, spec), std::invalid_argument);
}

TEST_CASE("build_poisoned_dataset bookkeeping") {
    auto base = black_dataset(500, 2, 16);
    auto spec = grey_pixel_spec(8, 8);
    spec.epsilon_count = 50;

    auto poisoned = build_poisoned_dataset(base, spec, 11);
    CHECK(poisoned.data.size() == base.size() + 50);
    CHECK(poisoned.data.count_of_label(1) == 550);
    CHECK(static_cast<int>(poisoned.poisoned_indices.size()) == 50);
    int tagged = 0;
    for (auto p : poisoned.data.provenance)
        if (p == Provenance::Poison) ++tagged;
    CHECK(tagged == 50);

    // clean prefix byte-identical to the base
    CHECK(std::equal(base.images.begin(), base.images.end(), poisoned.data.images.begin()));
    for (int i = 0; i < base.size(); ++i) CHECK(poisoned.data.labels[i] == base.labels[i]);

    // every poisoned example is a marked attack image with the target label
    for (int idx : poisoned.poisoned_indices) {
        CHECK(poisoned.data.labels[idx] == 1);
        CHECK(poisoned.data.provenance[idx] == Provenance::Poison);
        CHECK(poisoned.data.image(idx)[8 * 16 + 8] == 0.5);
    }

    // determinism
    auto again = build_poisoned_dataset(base, spec, 11);
    CHECK(again.data.images == poisoned.data.images);
    CHECK(again.poisoned_indices == poisoned.poisoned_indices);
}

TEST_CASE("build_poisoned_dataset edge cases") {
    auto base = black_dataset(20, 2, 16);
    auto spec = grey_pixel_spec(8, 8);

    // zero poison leaves the dataset identical
    auto none = build_poisoned_dataset(base, spec, 3);
    CHECK(none.data.images == base.images);
    CHECK(none.data.labels == base.labels);

    // too few attack examples
    spec.epsilon_count = 21;
    CHECK_THROWS_AS(build_poisoned_dataset(base, spec, 3), std::invalid_argument);

    // attack == target is rejected
    spec.epsilon_count = 1;
    spec.target_label = 0;
    CHECK_THROWS_AS(build_poisoned_dataset(base, spec, 3), std::invalid_argument);
}

TEST_CASE("replace mode keeps the dataset size") {
    auto base = black_dataset(50, 2, 16);
    auto spec = grey_pixel_spec(3, 3);
    spec.epsilon_count = 10;
    spec.replace = true;
    auto poisoned = build_poisoned_dataset(base, spec, 5);
    CHECK(poisoned.data.size() == base.size());
    CHECK(poisoned.data.count_of_label(1) == 60);
    CHECK(poisoned.data.count_of_label(0) == 40);
}

TEST_CASE("build_poisoned_testset marks every attack image") {
    auto test = black_dataset(100, 3, 16);
    auto spec = grey_pixel_spec(2, 2);
    auto pois = build_poisoned_testset(test, spec);
    CHECK(pois.size() == 100);  // one per attack-label image
    for (int i = 0; i < pois.size(); ++i) {
        CHECK(pois.labels[i] == spec.target_label);
        CHECK(pois.image(i)[2 * 16 + 2] == 0.5);
    }
}

TEST_CASE("toy dataset: determinism, template spread, noise behavior") {
    ToyConfig cfg;
    cfg.num_classes = 4;
    cfg.per_class = 20;
    cfg.height = cfg.width = 16;
    cfg.channels = 1;
    cfg.class_signal = 0.4;
    cfg.noise = 0.2;
    cfg.seed = 31;

    auto a = generate_toy_dataset(cfg);
    auto b = generate_toy_dataset(cfg);
    CHECK(a.images == b.images);
    a.validate();

    // template spread property
    auto templates = class_templates(cfg);
    const double need = 0.5 * cfg.class_signal * 16.0;
    for (std::size_t i = 0; i < templates.size(); ++i)
        for (std::size_t j = i + 1; j < templates.size(); ++j) {
            double s = 0.0;
            for (std::size_t p = 0; p < templates[i].size(); ++p)
                s += (templates[i][p] - templates[j][p]) * (templates[i][p] - templates[j][p]);
            CHECK(std::sqrt(s) >= need);
        }

    // zero noise collapses each class to its template
    cfg.noise = 0.0;
    auto pure = generate_toy_dataset(cfg);
    for (int i = 1; i < cfg.per_class; ++i) {
        CHECK(std::equal(pure.image(0).begin(), pure.image(0).end(), pure.image(i).begin()));
    }

    // train/test splits share templates but not noise
    cfg.noise = 0.2;
    ToyConfig test_cfg = cfg;
    test_cfg.noise_stream = 1;
    auto train_set = generate_toy_dataset(cfg);
    auto test_set = generate_toy_dataset(test_cfg);
    CHECK(train_set.images != test_set.images);
}

TEST_CASE("a plain MLP solves a high-signal two-class toy problem") {
    ToyConfig cfg;
    cfg.num_classes = 2;
    cfg.per_class = 150;
    cfg.height = cfg.width = 12;
    cfg.channels = 1;
    cfg.class_signal = 0.5;
    cfg.noise = 0.1;
    cfg.seed = 71;
    auto train_set = generate_toy_dataset(cfg);
    auto test_cfg = cfg;
    test_cfg.per_class = 60;
    test_cfg.noise_stream = 1;
    auto test_set = generate_toy_dataset(test_cfg);

    nnlab::NetworkConfig netcfg;
    netcfg.input = {12, 12, 1};
    netcfg.layers = {nnlab::FlattenSpec{}, nnlab::DenseSpec{16, nnlab::Activation::Relu},
                     nnlab::DenseSpec{2, nnlab::Activation::Linear}};
    netcfg.representation_layer = 1;
    netcfg.num_classes = 2;
    netcfg.seed = 72;
    nnlab::TrainConfig tc;
    tc.epochs = 20;
    tc.batch_size = 16;
    tc.learning_rate = 0.08;
    tc.momentum = 0.9;
    tc.seed = 73;
    auto trained = nnlab::train(nnlab::Network::init(netcfg), train_set, tc);
    CHECK(nnlab::evaluate_accuracy(trained.net, test_set) >= 0.99);
}

TEST_CASE("merge_labels compacts classes and preserves provenance") {
    auto base = black_dataset(10, 4, 8);
    base.provenance[5] = Provenance::Poison;
    auto merged = merge_labels(base, {2, 3}, 2);
    CHECK(merged.num_classes == 3);
    CHECK(merged.count_of_label(2) == 20);
    CHECK(merged.count_of_label(0) == 10);
    CHECK(merged.provenance[5] == Provenance::Poison);

    // merge then poison into the merged class keeps the invariants
    auto spec = grey_pixel_spec(4, 4);
    spec.attack_label = 0;
    spec.target_label = 2;
    spec.epsilon_count = 5;
    auto poisoned = build_poisoned_dataset(merged, spec, 7);
    CHECK(static_cast<int>(poisoned.poisoned_indices.size()) == 5);
    CHECK(poisoned.data.count_of_label(2) == 25);

    CHECK_THROWS_AS(merge_labels(base, {}, 0), std::invalid_argument);
    CHECK_THROWS_AS(merge_labels(base, {1, 2}, 0), std::invalid_argument);
}
