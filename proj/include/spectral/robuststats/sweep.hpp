#pragma once

#include <iosfwd>
#include <string>

#include "spectral/robuststats/separability.hpp"

namespace spectral::robuststats {

// Finite-sample phase sweep: mean separation fixed at
// ||Delta||^2 = sep_factor * 10 sigma2 / eps, success rate of
// check_separability recorded per sample size.
struct SweepConfig {
    int dim = 8;
    double eps = 0.1;          // corollary regime requires eps < 1/4
    double sigma2 = 1.0;
    double sep_factor = 1.0;   // >= 1 for the corollary regime; 0 = no-signal control
    std::vector<int> n_grid;
    int trials = 100;
    std::uint64_t seed = 0;
    PopulationKind population = PopulationKind::Gaussian;

    void validate() const;
};

struct SweepRow {
    int n = 0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
};

// Trials run in parallel, one derived seed per (grid point, trial);
// aggregation is count-based and order-independent.
std::vector<SweepRow> finite_sample_sweep(const SweepConfig& cfg);

// CSV: header `n,trials,successes,success_rate`, one row per grid point.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::string sweep_csv_string(const std::vector<SweepRow>& rows);

// key=value text: dim=, eps=, sigma2=, sep_factor=, n= (comma separated
// grid), trials=, seed=. Unknown keys rejected with the line number.
SweepConfig parse_sweep_config(std::istream& in);
SweepConfig load_sweep_config(const std::string& path);

}  // namespace spectral::robuststats
