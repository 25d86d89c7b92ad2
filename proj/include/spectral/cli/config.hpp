#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "spectral/nnlab/network.hpp"
#include "spectral/poison/backdoor.hpp"
#include "spectral/poison/toygen.hpp"

namespace spectral::cli {

// Scenario file: sectioned key=value text (INI style) or the same structure
// as JSON. Every seed is explicit; the SPECTRAL_SEED_OVERRIDE environment
// variable replaces all of them (with per-role derived streams).
struct ScenarioConfig {
    struct Dataset {
        std::string kind = "toy";  // "toy" | "external"
        poison::ToyConfig toy;     // kind == toy (seed filled from [seeds] data)
        int test_per_class = 125;
        std::string path;          // kind == external: directory with train/ and test/
    } dataset;

    struct Backdoor {
        poison::MarkShape shape = poison::MarkShape::Pixel;
        int row = 0;
        int col = 0;
        std::vector<double> color;
        int attack = 0;
        int target = 1;
        std::optional<double> eps_pct;  // fraction of the target-label bucket
        std::optional<int> eps_count;   // absolute override
        bool replace = false;
    } backdoor;

    struct NetworkSection {
        std::vector<nnlab::LayerSpec> layers;
        int representation_layer = 0;  // may be overridden by [defense]
    } network;

    struct Training {
        int epochs = 10;
        int batch = 32;
        double lr = 0.05;
        double momentum = 0.9;
        std::vector<std::pair<int, double>> lr_decay;
    } training;

    struct Defense {
        double eps_bound = 0.1;
        std::optional<int> representation_layer;
    } defense;

    struct Seeds {
        std::uint64_t data = 0;
        std::uint64_t attack = 0;
        std::uint64_t train1 = 0;
        std::uint64_t train2 = 0;
        std::uint64_t power = 0;
        bool data_set = false, attack_set = false, train1_set = false, train2_set = false,
             power_set = false;
    } seeds;

    // derived: epsilon_count for a given base dataset
    int resolve_epsilon_count(const nnlab::LabeledDataset& base) const;

    nnlab::NetworkConfig network_config(const nnlab::LabeledDataset& base) const;
    nnlab::TrainConfig train_config() const;
    poison::BackdoorSpec backdoor_spec(const nnlab::LabeledDataset& base) const;
};

// Parses .json files as JSON, everything else as INI. Diagnostics carry line
// numbers for the INI path. Applies SPECTRAL_SEED_OVERRIDE when set.
ScenarioConfig load_scenario_config(const std::string& path);

// Parse a layer list like "conv:8:3:1:relu,flatten,dense:64:relu,dense:4:linear".
std::vector<nnlab::LayerSpec> parse_layer_list(const std::string& text);

}  // namespace spectral::cli
