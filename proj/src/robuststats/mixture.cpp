#include "spectral/robuststats/mixture.hpp"

#include <cmath>
#include <stdexcept>

#include "spectral/rng.hpp"

namespace spectral::robuststats {

void MixtureSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("MixtureSpec: dim must be >= 1");
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("MixtureSpec: eps must be in (0, 1/2)");
    if (n < 1) throw std::invalid_argument("MixtureSpec: n must be >= 1");
    if (sigma2 <= 0.0) throw std::invalid_argument("MixtureSpec: sigma2 must be positive");
    if (static_cast<int>(mu_d.size()) != dim || static_cast<int>(mu_w.size()) != dim)
        throw std::invalid_argument("MixtureSpec: mean dimension mismatch");
}

int MixtureSample::poison_count() const {
    int c = 0;
    for (Origin o : origin)
        if (o == Origin::Poison) ++c;
    return c;
}

MixtureSample sample_mixture(const MixtureSpec& spec) {
    spec.validate();
    Rng rng(splitmix64(spec.seed));
    const int n = spec.n, d = spec.dim;
    const double sigma = std::sqrt(spec.sigma2);
    const double sphere_radius = sigma * std::sqrt(static_cast<double>(d));

    MixtureSample out;
    out.spec = spec;
    out.points = linalg::DenseMatrix(n, d);
    out.origin.resize(n);

    for (int i = 0; i < n; ++i) {
        const bool poison = rng.uniform01() < spec.eps;
        out.origin[i] = poison ? Origin::Poison : Origin::Clean;
        const std::vector<double>& mu = poison ? spec.mu_w : spec.mu_d;
        double* row = out.points.data.data() + static_cast<std::size_t>(i) * d;
        if (spec.population == PopulationKind::Gaussian) {
            for (int j = 0; j < d; ++j) row[j] = mu[j] + sigma * rng.normal();
        } else {
            auto dir = rng.unit_vector(d);
            for (int j = 0; j < d; ++j) row[j] = mu[j] + sphere_radius * dir[j];
        }
    }
    return out;
}

MixtureSpec make_axis_spec(int dim, double eps, int n, double delta_sq_norm, double sigma2,
                           std::uint64_t seed) {
    MixtureSpec spec;
    spec.dim = dim;
    spec.eps = eps;
    spec.n = n;
    spec.sigma2 = sigma2;
    spec.seed = seed;
    spec.mu_d.assign(dim, 0.0);
    spec.mu_w.assign(dim, 0.0);
    spec.mu_w[0] = std::sqrt(delta_sq_norm);
    return spec;
}

}  // namespace spectral::robuststats
