#include "spectral/robuststats/separability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral/linalg/kernels.hpp"
#include "spectral/linalg/power_iteration.hpp"
#include "spectral/rng.hpp"

namespace spectral::robuststats {

namespace {

constexpr std::uint64_t kPowerSalt = 0x705e;
constexpr int kPowerMaxIters = 400;
constexpr double kPowerTol = 1e-10;

struct GroupStats {
    std::vector<int> clean_rows;
    std::vector<int> poison_rows;
};

GroupStats split_rows(const MixtureSample& s) {
    GroupStats g;
    for (int i = 0; i < s.points.rows; ++i)
        (s.origin[i] == Origin::Clean ? g.clean_rows : g.poison_rows).push_back(i);
    return g;
}

std::vector<double> rows_mean(const linalg::DenseMatrix& m, const std::vector<int>& rows) {
    std::vector<double> mu(m.cols, 0.0);
    for (int i : rows)
        for (int j = 0; j < m.cols; ++j) mu[j] += m.at(i, j);
    for (double& x : mu) x /= static_cast<double>(rows.size());
    return mu;
}

// covariance of the selected rows about their own mean, divided by |rows|
linalg::DenseMatrix rows_covariance(const linalg::DenseMatrix& m, const std::vector<int>& rows,
                                    const std::vector<double>& mu) {
    const int d = m.cols;
    linalg::DenseMatrix cov(d, d);
    for (int i : rows) {
        for (int j = 0; j < d; ++j) {
            const double xj = m.at(i, j) - mu[j];
            for (int k = j; k < d; ++k) cov.at(j, k) += xj * (m.at(i, k) - mu[k]);
        }
    }
    for (int j = 0; j < d; ++j)
        for (int k = j; k < d; ++k) {
            cov.at(j, k) /= static_cast<double>(rows.size());
            cov.at(k, j) = cov.at(j, k);
        }
    return cov;
}

}  // namespace

std::vector<double> top_mixture_eigenvector(const MixtureSample& sample) {
    auto centered = linalg::center_rows(sample.points);
    auto res = linalg::top_right_singular_vector(centered, kPowerTol, kPowerMaxIters,
                                                 derive_seed(sample.spec.seed, kPowerSalt));
    return res.top_vector;
}

SeparabilityVerdict check_separability(const MixtureSample& sample) {
    const int n = sample.points.rows;
    if (n < 2) throw std::invalid_argument("check_separability: need at least 2 rows");

    SeparabilityVerdict verdict;
    verdict.projection_vector = top_mixture_eigenvector(sample);

    auto centered = linalg::center_rows(sample.points);
    std::vector<double> proj(n);
    linalg::matvec(centered.matrix, verdict.projection_vector, proj);
    for (double& p : proj) p = std::abs(p);

    const auto groups = split_rows(sample);
    const int nc = static_cast<int>(groups.clean_rows.size());
    const int np = static_cast<int>(groups.poison_rows.size());
    verdict.degenerate = (nc == 0 || np == 0);

    // sort magnitudes, tracking origin, and scan candidate thresholds:
    // every magnitude plus midpoints between adjacent distinct magnitudes
    std::vector<std::pair<double, Origin>> order(n);
    for (int i = 0; i < n; ++i) order[i] = {proj[i], sample.origin[i]};
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> candidates;
    candidates.reserve(2 * n + 1);
    for (int i = 0; i < n; ++i) {
        candidates.push_back(order[i].first);
        if (i + 1 < n && order[i + 1].first > order[i].first)
            candidates.push_back(0.5 * (order[i].first + order[i + 1].first));
    }
    candidates.push_back(order.back().first + 1.0);

    double best_max = 2.0;
    int idx = 0;                // rows with magnitude < t seen so far
    int clean_below = 0, poison_below = 0;
    for (double t : candidates) {
        while (idx < n && order[idx].first < t) {
            if (order[idx].second == Origin::Clean)
                ++clean_below;
            else
                ++poison_below;
            ++idx;
        }
        // strict inequalities both ways: clean misses when |proj| > t
        int clean_above = nc - clean_below;
        for (int k = idx; k < n && order[k].first == t; ++k)
            if (order[k].second == Origin::Clean) --clean_above;  // equal-to-t rows do not miss

        const double cmr = nc > 0 ? static_cast<double>(clean_above) / nc : 0.0;
        const double ppr = np > 0 ? static_cast<double>(poison_below) / np : 0.0;
        const double worst = std::max(cmr, ppr);
        if (worst < best_max) {
            best_max = worst;
            verdict.threshold_t = t;
            verdict.clean_miss_rate = cmr;
            verdict.poison_pass_rate = ppr;
        }
    }

    verdict.separable = verdict.clean_miss_rate < sample.spec.eps &&
                        verdict.poison_pass_rate < sample.spec.eps;
    return verdict;
}

bool lemma1_condition(const MixtureSpec& spec) {
    spec.validate();
    double delta_sq = 0.0;
    for (int j = 0; j < spec.dim; ++j) {
        const double d = spec.mu_d[j] - spec.mu_w[j];
        delta_sq += d * d;
    }
    return delta_sq >= 6.0 * spec.sigma2 / spec.eps;
}

double lemma2_threshold(double delta_dot_v, double sigma, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("lemma2_threshold: eps in (0, 1/2)");
    if (sigma <= 0.0) throw std::invalid_argument("lemma2_threshold: sigma must be positive");
    return eps * std::abs(delta_dot_v) + sigma / std::sqrt(eps);
}

CorrelationCheck lemma3_correlation_check(const MixtureSample& sample) {
    const auto groups = split_rows(sample);
    if (groups.clean_rows.empty() || groups.poison_rows.empty())
        throw std::invalid_argument("lemma3_correlation_check: sample has a single origin");

    const auto v = top_mixture_eigenvector(sample);
    const auto mu_d = rows_mean(sample.points, groups.clean_rows);
    const auto mu_w = rows_mean(sample.points, groups.poison_rows);

    double dv = 0.0;
    for (int j = 0; j < sample.points.cols; ++j) dv += (mu_d[j] - mu_w[j]) * v[j];

    CorrelationCheck out;
    out.lhs = dv * dv;
    out.rhs = 2.0 * sample.spec.sigma2 / sample.spec.eps;
    out.holds = out.lhs >= out.rhs * (1.0 - kCorrelationSlack);
    return out;
}

CovarianceResidual covariance_decomposition_check(const MixtureSample& sample) {
    const auto groups = split_rows(sample);
    if (groups.clean_rows.empty() || groups.poison_rows.empty())
        throw std::invalid_argument("covariance_decomposition_check: both origins required");

    const int n = sample.points.rows;
    const int d = sample.points.cols;
    const double eps_hat = static_cast<double>(groups.poison_rows.size()) / n;

    auto centered = linalg::center_rows(sample.points);
    auto sigma_f = linalg::covariance(centered.matrix, static_cast<double>(n));

    const auto mu_d = rows_mean(sample.points, groups.clean_rows);
    const auto mu_w = rows_mean(sample.points, groups.poison_rows);
    auto sigma_d = rows_covariance(sample.points, groups.clean_rows, mu_d);
    auto sigma_w = rows_covariance(sample.points, groups.poison_rows, mu_w);

    CovarianceResidual out;
    double resid = 0.0, ref = 0.0;
    for (int j = 0; j < d; ++j) {
        const double delta_j = mu_d[j] - mu_w[j];
        for (int k = 0; k < d; ++k) {
            const double delta_k = mu_d[k] - mu_w[k];
            const double rhs = (1.0 - eps_hat) * sigma_d.at(j, k) + eps_hat * sigma_w.at(j, k) +
                               eps_hat * (1.0 - eps_hat) * delta_j * delta_k;
            const double r = sigma_f.at(j, k) - rhs;
            resid += r * r;
            ref += sigma_f.at(j, k) * sigma_f.at(j, k);
        }
    }
    out.residual_fro = std::sqrt(resid);
    out.sigma_f_fro = std::sqrt(ref);
    return out;
}

}  // namespace spectral::robuststats
