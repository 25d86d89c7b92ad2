#pragma once

#include <cstdint>
#include <vector>

#include "spectral/linalg/dense_matrix.hpp"

namespace spectral::robuststats {

enum class Origin : std::uint8_t { Clean, Poison };

enum class PopulationKind : std::uint8_t {
    Gaussian,  // N(mu, sigma2 * I)
    Sphere,    // mu + uniform direction scaled to radius sigma*sqrt(d); covariance sigma2 * I
};

// Two-population mixture F = (1 - eps) D + eps W with a shared covariance
// bound sigma2 for both populations.
struct MixtureSpec {
    int dim = 0;
    double eps = 0.0;  // in (0, 1/2)
    int n = 0;
    std::vector<double> mu_d;
    std::vector<double> mu_w;
    double sigma2 = 1.0;
    std::uint64_t seed = 0;
    PopulationKind population = PopulationKind::Gaussian;

    void validate() const;
};

struct MixtureSample {
    linalg::DenseMatrix points;  // n x dim
    std::vector<Origin> origin;  // per row
    MixtureSpec spec;

    int poison_count() const;
};

// n rows, each independently Poison with probability eps (one coin per point),
// then drawn from the row's population. Bit-identical for a fixed seed.
MixtureSample sample_mixture(const MixtureSpec& spec);

// Convenience: mu_d = 0, mu_w = delta_norm * e1.
MixtureSpec make_axis_spec(int dim, double eps, int n, double delta_sq_norm, double sigma2,
                           std::uint64_t seed);

}  // namespace spectral::robuststats
