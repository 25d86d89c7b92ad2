#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectral/nnlab/network.hpp"
#include "spectral/pipeline/scoring.hpp"

namespace spectral::pipeline {

// Per-bucket statistics in the style of the spectrum tables: norm of the
// representation mean, shift of that mean against the clean-only rows (when
// ground truth provenance identifies them), and the top singular values of
// the unnormalized centered representation matrix.
struct SpectrumStats {
    int label = 0;
    int bucket_size = 0;
    double mean_norm = 0.0;
    std::optional<double> shift_in_mean;  // set when the bucket contains poison
    std::vector<double> top_singular_values;
};

struct LabelAudit {
    SpectrumStats spectrum;
    int removed_count = 0;
    int poison_in_bucket = 0;
    int poison_removed = 0;
    int poison_left = 0;
};

struct PipelineReport {
    double nat_acc_1 = 0.0;
    double pois_acc_1 = 0.0;
    double nat_acc_2 = 0.0;
    double pois_acc_2 = 0.0;
    double std_pois = 0.0;
    int poison_left = 0;      // ground-truth audit over the cleaned set
    int epsilon_count = 0;    // ground-truth poison count of the input
    std::vector<LabelAudit> per_label;
};

std::string report_to_json(const PipelineReport& r);
PipelineReport report_from_json(const std::string& text);
std::string report_to_table(const PipelineReport& r);

struct PipelineSeeds {
    std::uint64_t train1 = 1;  // first training (init + shuffle streams derive from it)
    std::uint64_t train2 = 2;  // retraining and the clean-control model
    std::uint64_t power = 3;   // per-label power-iteration starts
};

struct Algorithm1Result {
    nnlab::LabeledDataset cleaned;
    PipelineReport report;
    std::vector<OutlierScoreVector> per_label_scores;
    std::vector<RemovalDecision> decisions;
    nnlab::TrainedNetwork first_model;
};

// Full pass: train on the (possibly poisoned) data, score and trim every
// label bucket, retrain from a fresh initialization on the kept examples,
// and evaluate against a never-poisoned control. Provenance is consulted
// only for the audit fields of the report, never for removal decisions.
Algorithm1Result run_algorithm1(const nnlab::LabeledDataset& train_data,
                                const nnlab::LabeledDataset& clean_test,
                                const nnlab::LabeledDataset& pois_test,
                                const nnlab::NetworkConfig& netcfg,
                                const nnlab::TrainConfig& traincfg, double eps_bound,
                                const PipelineSeeds& seeds);

// Spectrum statistics for one label bucket of a trained model.
SpectrumStats spectrum_report(const nnlab::LabeledDataset& train_data,
                              const nnlab::Network& net, int label,
                              std::uint64_t power_seed = 0);

// The three per-example statistics at both levels (representation and raw
// pixels): centered l2 norm, squared projection on a seeded random unit
// vector, squared projection on the top singular vector.
enum class StatLevel : std::uint8_t { Representation, RawPixels };
enum class StatKind : std::uint8_t { L2Norm, RandomProjection, TopSingularVector };

const char* stat_level_name(StatLevel level);
const char* stat_kind_name(StatKind kind);

struct ScoreSet {
    StatLevel level;
    StatKind kind;
    std::vector<double> scores;  // aligned with `indices`
};

struct StatisticComparison {
    std::vector<int> indices;  // dataset indices of the bucket rows
    std::vector<nnlab::Provenance> provenance;
    std::array<ScoreSet, 6> sets;
};

StatisticComparison statistic_comparison(const nnlab::RepresentationMatrix& reps,
                                         const linalg::DenseMatrix& raw_pixels,
                                         const std::vector<nnlab::Provenance>& provenance,
                                         std::uint64_t seed);

// CSV lines "index,provenance,score" for one score set.
std::string score_set_csv(const StatisticComparison& cmp, const ScoreSet& set);

// Fraction of poison-tagged scores strictly above the q-quantile (order
// statistic) of the clean-tagged scores.
double separation_metric(const std::vector<double>& scores,
                         const std::vector<nnlab::Provenance>& provenance, double quantile);

}  // namespace spectral::pipeline
