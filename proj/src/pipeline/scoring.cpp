#include "spectral/pipeline/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "spectral/linalg/kernels.hpp"
#include "spectral/linalg/power_iteration.hpp"

namespace spectral::pipeline {

OutlierScoreVector score_label(const nnlab::RepresentationMatrix& reps,
                               std::uint64_t power_seed, double tol, int max_iters) {
    const int n = reps.rows.rows;
    if (n < 1) throw std::invalid_argument("score_label: empty representation matrix");

    OutlierScoreVector out;
    out.label = reps.label;
    out.example_indices = reps.dataset_indices;
    out.scores.assign(n, 0.0);

    if (n == 1) {
        // a singleton bucket centers to zero; no direction to score along
        out.degenerate = true;
        out.singular_vector.assign(reps.rows.cols, 0.0);
        if (reps.rows.cols > 0) out.singular_vector[0] = 1.0;
        return out;
    }

    auto centered = linalg::center_rows(reps.rows);
    auto spec = linalg::top_right_singular_vector(centered, tol, max_iters, power_seed);
    out.singular_vector = spec.top_vector;
    out.singular_value = spec.top_value;

    std::vector<double> proj(n);
    linalg::matvec(centered.matrix, out.singular_vector, proj);
    for (int i = 0; i < n; ++i) out.scores[i] = proj[i] * proj[i];
    return out;
}

int removal_budget(double eps_bound, int n) {
    return static_cast<int>(std::ceil(1.5 * eps_bound * n - 1e-9));
}

RemovalDecision remove_top_scores(const OutlierScoreVector& scores, double eps_bound) {
    const int n = static_cast<int>(scores.scores.size());
    if (n < 1) throw std::invalid_argument("remove_top_scores: empty score vector");
    if (!(eps_bound > 0.0 && eps_bound < 1.0 / 1.5))
        throw std::invalid_argument("remove_top_scores: eps_bound must be in (0, 1/1.5)");
    if (scores.example_indices.size() != scores.scores.size())
        throw std::invalid_argument("remove_top_scores: misaligned score vector");

    const int budget = removal_budget(eps_bound, n);
    if (budget >= n)
        throw std::invalid_argument("remove_top_scores: removal budget would empty the bucket");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
        return scores.example_indices[a] < scores.example_indices[b];  // tie: lower index goes
    });

    RemovalDecision out;
    out.label = scores.label;
    out.budget_used = budget;
    for (int i = 0; i < n; ++i) {
        const int di = scores.example_indices[order[i]];
        (i < budget ? out.removed_indices : out.kept_indices).push_back(di);
    }
    std::sort(out.removed_indices.begin(), out.removed_indices.end());
    std::sort(out.kept_indices.begin(), out.kept_indices.end());
    return out;
}

}  // namespace spectral::pipeline
