#include "spectral/pipeline/defense.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spectral/linalg/kernels.hpp"
#include "spectral/linalg/power_iteration.hpp"
#include "spectral/rng.hpp"

namespace spectral::pipeline {

using nnlab::LabeledDataset;
using nnlab::Provenance;

namespace {

constexpr std::uint64_t kSpectrumSalt = 0x57ec;

SpectrumStats bucket_spectrum(const nnlab::RepresentationMatrix& reps,
                              const std::vector<Provenance>& bucket_prov,
                              std::uint64_t power_seed) {
    SpectrumStats s;
    s.label = reps.label;
    s.bucket_size = reps.rows.rows;

    auto centered = linalg::center_rows(reps.rows);
    s.mean_norm = linalg::norm2(centered.mean);

    const int k = std::min(3, reps.rows.cols);
    if (reps.rows.rows > 1)
        s.top_singular_values =
            linalg::top_k_singular_values(centered, k, 1e-10, 1000, power_seed);
    else
        s.top_singular_values.assign(k, 0.0);

    // shift of the bucket mean against its clean-only rows (audit only)
    std::vector<int> clean_rows;
    for (int i = 0; i < reps.rows.rows; ++i)
        if (bucket_prov[i] == Provenance::Clean) clean_rows.push_back(i);
    if (!clean_rows.empty() && static_cast<int>(clean_rows.size()) < reps.rows.rows) {
        std::vector<double> clean_mean(reps.rows.cols, 0.0);
        for (int i : clean_rows)
            for (int j = 0; j < reps.rows.cols; ++j) clean_mean[j] += reps.rows.at(i, j);
        double shift = 0.0;
        for (int j = 0; j < reps.rows.cols; ++j) {
            clean_mean[j] /= static_cast<double>(clean_rows.size());
            const double d = centered.mean[j] - clean_mean[j];
            shift += d * d;
        }
        s.shift_in_mean = std::sqrt(shift);
    }
    return s;
}

std::vector<Provenance> bucket_provenance(const LabeledDataset& data,
                                          const std::vector<int>& indices) {
    std::vector<Provenance> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(data.provenance[i]);
    return out;
}

LabeledDataset subset_dataset(const LabeledDataset& data, const std::vector<int>& keep) {
    LabeledDataset out;
    out.height = data.height;
    out.width = data.width;
    out.channels = data.channels;
    out.num_classes = data.num_classes;
    const int esz = data.example_size();
    out.images.reserve(keep.size() * static_cast<std::size_t>(esz));
    for (int i : keep) {
        const auto img = data.image(i);
        out.images.insert(out.images.end(), img.begin(), img.end());
        out.labels.push_back(data.labels[i]);
        out.provenance.push_back(data.provenance[i]);
    }
    return out;
}

int poison_count(const LabeledDataset& data) {
    int c = 0;
    for (auto p : data.provenance)
        if (p == Provenance::Poison) ++c;
    return c;
}

}  // namespace

Algorithm1Result run_algorithm1(const LabeledDataset& train_data,
                                const LabeledDataset& clean_test,
                                const LabeledDataset& pois_test,
                                const nnlab::NetworkConfig& netcfg,
                                const nnlab::TrainConfig& traincfg, double eps_bound,
                                const PipelineSeeds& seeds) {
    Algorithm1Result result;
    PipelineReport& report = result.report;
    report.epsilon_count = poison_count(train_data);

    // first training
    auto cfg1 = netcfg;
    cfg1.seed = derive_seed(seeds.train1, 1);
    auto tc1 = traincfg;
    tc1.seed = derive_seed(seeds.train1, 2);
    const auto init1 = nnlab::Network::init(cfg1);
    result.first_model = nnlab::train(init1, train_data, tc1);
    const auto& model1 = result.first_model.net;

    report.nat_acc_1 = nnlab::evaluate_accuracy(model1, clean_test);
    report.pois_acc_1 = nnlab::evaluate_accuracy(model1, pois_test);

    // per-label scoring and removal; provenance only feeds audit fields
    std::vector<int> keep_all;
    for (int label = 0; label < train_data.num_classes; ++label) {
        if (train_data.count_of_label(label) == 0) continue;
        auto reps = nnlab::extract_representations(model1, train_data, label);
        auto scores = score_label(reps, derive_seed(seeds.power, label));
        auto decision = remove_top_scores(scores, eps_bound);

        LabelAudit audit;
        audit.spectrum = bucket_spectrum(reps, bucket_provenance(train_data, reps.dataset_indices),
                                         derive_seed(seeds.power, kSpectrumSalt + label));
        audit.removed_count = static_cast<int>(decision.removed_indices.size());
        for (int i : reps.dataset_indices)
            if (train_data.provenance[i] == Provenance::Poison) ++audit.poison_in_bucket;
        for (int i : decision.removed_indices)
            if (train_data.provenance[i] == Provenance::Poison) ++audit.poison_removed;
        audit.poison_left = audit.poison_in_bucket - audit.poison_removed;
        report.per_label.push_back(audit);

        keep_all.insert(keep_all.end(), decision.kept_indices.begin(),
                        decision.kept_indices.end());
        result.per_label_scores.push_back(std::move(scores));
        result.decisions.push_back(std::move(decision));
    }
    std::sort(keep_all.begin(), keep_all.end());
    result.cleaned = subset_dataset(train_data, keep_all);
    report.poison_left = poison_count(result.cleaned);

    // retrain from a fresh initialization
    auto cfg2 = netcfg;
    cfg2.seed = derive_seed(seeds.train2, 1);
    auto tc2 = traincfg;
    tc2.seed = derive_seed(seeds.train2, 2);
    const auto init2 = nnlab::Network::init(cfg2);
    if (init2.layer_weights() == init1.layer_weights())
        throw std::logic_error("run_algorithm1: retraining initialization equals the first run");
    auto model2 = nnlab::train(init2, result.cleaned, tc2);
    report.nat_acc_2 = nnlab::evaluate_accuracy(model2.net, clean_test);
    report.pois_acc_2 = nnlab::evaluate_accuracy(model2.net, pois_test);

    // never-poisoned control for the Std Pois column (audit-side use of
    // ground truth: the control trains on the provenance-clean rows)
    std::vector<int> clean_rows;
    for (int i = 0; i < train_data.size(); ++i)
        if (train_data.provenance[i] == Provenance::Clean) clean_rows.push_back(i);
    auto control_data = subset_dataset(train_data, clean_rows);
    auto cfgc = netcfg;
    cfgc.seed = derive_seed(seeds.train2, 3);
    auto tcc = traincfg;
    tcc.seed = derive_seed(seeds.train2, 4);
    auto control = nnlab::train(nnlab::Network::init(cfgc), control_data, tcc);
    report.std_pois = nnlab::evaluate_accuracy(control.net, pois_test);

    return result;
}

SpectrumStats spectrum_report(const LabeledDataset& train_data, const nnlab::Network& net,
                              int label, std::uint64_t power_seed) {
    auto reps = nnlab::extract_representations(net, train_data, label);
    return bucket_spectrum(reps, bucket_provenance(train_data, reps.dataset_indices),
                           power_seed);
}

const char* stat_level_name(StatLevel level) {
    return level == StatLevel::Representation ? "representation" : "raw_pixels";
}

const char* stat_kind_name(StatKind kind) {
    switch (kind) {
        case StatKind::L2Norm: return "l2_norm";
        case StatKind::RandomProjection: return "random_projection";
        case StatKind::TopSingularVector: return "top_singular_vector";
    }
    return "?";
}

namespace {

void level_scores(const linalg::DenseMatrix& m, StatLevel level, std::uint64_t seed,
                  StatisticComparison& out, int slot) {
    auto centered = linalg::center_rows(m);
    const int n = m.rows;

    ScoreSet l2{level, StatKind::L2Norm, std::vector<double>(n)};
    for (int i = 0; i < n; ++i) l2.scores[i] = linalg::norm2(centered.matrix.row(i));

    Rng rng(derive_seed(seed, level == StatLevel::Representation ? 0 : 1));
    const auto u = rng.unit_vector(m.cols);
    ScoreSet rand_set{level, StatKind::RandomProjection, std::vector<double>(n)};
    std::vector<double> proj(n);
    linalg::matvec(centered.matrix, u, proj);
    for (int i = 0; i < n; ++i) rand_set.scores[i] = proj[i] * proj[i];

    auto top = linalg::top_right_singular_vector(
        centered, 1e-10, 1000, derive_seed(seed, level == StatLevel::Representation ? 2 : 3));
    ScoreSet sv{level, StatKind::TopSingularVector, std::vector<double>(n)};
    linalg::matvec(centered.matrix, top.top_vector, proj);
    for (int i = 0; i < n; ++i) sv.scores[i] = proj[i] * proj[i];

    out.sets[slot] = std::move(l2);
    out.sets[slot + 1] = std::move(rand_set);
    out.sets[slot + 2] = std::move(sv);
}

}  // namespace

StatisticComparison statistic_comparison(const nnlab::RepresentationMatrix& reps,
                                         const linalg::DenseMatrix& raw_pixels,
                                         const std::vector<Provenance>& provenance,
                                         std::uint64_t seed) {
    if (raw_pixels.rows != reps.rows.rows)
        throw std::invalid_argument("statistic_comparison: row counts differ");
    if (static_cast<int>(provenance.size()) != reps.rows.rows)
        throw std::invalid_argument("statistic_comparison: provenance misaligned");

    StatisticComparison out;
    out.indices = reps.dataset_indices;
    out.provenance = provenance;
    level_scores(reps.rows, StatLevel::Representation, seed, out, 0);
    level_scores(raw_pixels, StatLevel::RawPixels, seed, out, 3);
    return out;
}

std::string score_set_csv(const StatisticComparison& cmp, const ScoreSet& set) {
    std::ostringstream ss;
    ss << "index,provenance,score\n";
    char buf[64];
    for (std::size_t i = 0; i < set.scores.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g", set.scores[i]);
        ss << cmp.indices[i] << "," << provenance_name(cmp.provenance[i]) << "," << buf << "\n";
    }
    return ss.str();
}

double separation_metric(const std::vector<double>& scores,
                         const std::vector<Provenance>& provenance, double quantile) {
    if (scores.size() != provenance.size())
        throw std::invalid_argument("separation_metric: misaligned inputs");
    std::vector<double> clean;
    std::vector<double> poison;
    for (std::size_t i = 0; i < scores.size(); ++i)
        (provenance[i] == Provenance::Clean ? clean : poison).push_back(scores[i]);
    if (clean.empty() || poison.empty()) return 0.0;

    std::sort(clean.begin(), clean.end());
    const int m = static_cast<int>(clean.size());
    int k = static_cast<int>(std::ceil(quantile * m));
    k = std::clamp(k, 1, m);
    const double threshold = clean[k - 1];

    int above = 0;
    for (double s : poison)
        if (s > threshold) ++above;
    return static_cast<double>(above) / static_cast<double>(poison.size());
}

// ---------------------------------------------------------------------------
// report serialization
// ---------------------------------------------------------------------------

std::string report_to_json(const PipelineReport& r) {
    nlohmann::json j;
    j["nat_acc_1"] = r.nat_acc_1;
    j["pois_acc_1"] = r.pois_acc_1;
    j["nat_acc_2"] = r.nat_acc_2;
    j["pois_acc_2"] = r.pois_acc_2;
    j["std_pois"] = r.std_pois;
    j["poison_left"] = r.poison_left;
    j["epsilon_count"] = r.epsilon_count;
    j["singular_value_convention"] = "unnormalized centered matrix M (not M/sqrt(n))";
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& a : r.per_label) {
        nlohmann::json e;
        e["label"] = a.spectrum.label;
        e["bucket_size"] = a.spectrum.bucket_size;
        e["mean_norm"] = a.spectrum.mean_norm;
        if (a.spectrum.shift_in_mean)
            e["shift_in_mean"] = *a.spectrum.shift_in_mean;
        else
            e["shift_in_mean"] = nullptr;
        e["top_singular_values"] = a.spectrum.top_singular_values;
        e["removed_count"] = a.removed_count;
        e["poison_in_bucket"] = a.poison_in_bucket;
        e["poison_removed"] = a.poison_removed;
        e["poison_left"] = a.poison_left;
        labels.push_back(e);
    }
    j["per_label"] = labels;
    return j.dump(2) + "\n";
}

PipelineReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    PipelineReport r;
    r.nat_acc_1 = j.at("nat_acc_1").get<double>();
    r.pois_acc_1 = j.at("pois_acc_1").get<double>();
    r.nat_acc_2 = j.at("nat_acc_2").get<double>();
    r.pois_acc_2 = j.at("pois_acc_2").get<double>();
    r.std_pois = j.at("std_pois").get<double>();
    r.poison_left = j.at("poison_left").get<int>();
    r.epsilon_count = j.at("epsilon_count").get<int>();
    for (const auto& e : j.at("per_label")) {
        LabelAudit a;
        a.spectrum.label = e.at("label").get<int>();
        a.spectrum.bucket_size = e.at("bucket_size").get<int>();
        a.spectrum.mean_norm = e.at("mean_norm").get<double>();
        if (!e.at("shift_in_mean").is_null())
            a.spectrum.shift_in_mean = e.at("shift_in_mean").get<double>();
        a.spectrum.top_singular_values =
            e.at("top_singular_values").get<std::vector<double>>();
        a.removed_count = e.at("removed_count").get<int>();
        a.poison_in_bucket = e.at("poison_in_bucket").get<int>();
        a.poison_removed = e.at("poison_removed").get<int>();
        a.poison_left = e.at("poison_left").get<int>();
        r.per_label.push_back(a);
    }
    return r;
}

std::string report_to_table(const PipelineReport& r) {
    std::ostringstream ss;
    char buf[256];
    ss << "Nat 1    Pois 1   # Pois Left  Nat 2    Pois 2   Std Pois\n";
    std::snprintf(buf, sizeof(buf), "%-8.2f %-8.2f %-12d %-8.2f %-8.2f %-8.2f\n",
                  100.0 * r.nat_acc_1, 100.0 * r.pois_acc_1, r.poison_left, 100.0 * r.nat_acc_2,
                  100.0 * r.pois_acc_2, 100.0 * r.std_pois);
    ss << buf;
    ss << "(accuracies in percent; poison injected: " << r.epsilon_count << ")\n\n";
    ss << "label  bucket  removed  pois-in  pois-rm  pois-left  mean-norm  shift     "
          "top singular values (unnormalized M)\n";
    for (const auto& a : r.per_label) {
        std::snprintf(buf, sizeof(buf), "%-6d %-7d %-8d %-8d %-8d %-10d %-10.4f ",
                      a.spectrum.label, a.spectrum.bucket_size, a.removed_count,
                      a.poison_in_bucket, a.poison_removed, a.poison_left,
                      a.spectrum.mean_norm);
        ss << buf;
        if (a.spectrum.shift_in_mean)
            std::snprintf(buf, sizeof(buf), "%-9.4f ", *a.spectrum.shift_in_mean);
        else
            std::snprintf(buf, sizeof(buf), "%-9s ", "n/a");
        ss << buf;
        for (double sv : a.spectrum.top_singular_values) {
            std::snprintf(buf, sizeof(buf), "%.4f ", sv);
            ss << buf;
        }
        ss << "\n";
    }
    return ss.str();
}

}  // namespace spectral::pipeline
