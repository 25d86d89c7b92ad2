#pragma once

#include <cstdint>
#include <vector>

#include "spectral/nnlab/network.hpp"

namespace spectral::pipeline {

// tau_i = ((R(x_i) - mean) . v)^2 for one label bucket, plus the direction
// that produced the scores.
struct OutlierScoreVector {
    int label = 0;
    std::vector<double> scores;
    std::vector<int> example_indices;  // dataset indices aligned with scores
    std::vector<double> singular_vector;
    double singular_value = 0.0;
    bool degenerate = false;  // singleton bucket: all-zero scores
};

OutlierScoreVector score_label(const nnlab::RepresentationMatrix& reps,
                               std::uint64_t power_seed = 0, double tol = 1e-10,
                               int max_iters = 1000);

struct RemovalDecision {
    int label = 0;
    std::vector<int> removed_indices;  // dataset indices, sorted
    std::vector<int> kept_indices;     // dataset indices, sorted
    int budget_used = 0;
};

// Removes the ceil(1.5 * eps_bound * n) highest-scoring examples of the
// bucket; score ties at the cutoff drop the lower dataset index first.
// eps_bound must lie in (0, 1/1.5) and the budget must leave at least one
// example.
RemovalDecision remove_top_scores(const OutlierScoreVector& scores, double eps_bound);

// ceil with a 1e-9 guard so that values like 1.5*0.1*100 (14.999.../15.000...2
// in floating point) land on the intended integer
int removal_budget(double eps_bound, int n);

}  // namespace spectral::pipeline
