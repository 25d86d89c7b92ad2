#pragma once

#include "spectral/robuststats/mixture.hpp"

namespace spectral::robuststats {

// Outcome of the two-sided threshold test: a sample is separable when some
// t > 0 keeps both the clean tail above t and the poison mass below t under
// an eps fraction, measured along the top eigenvector of the empirical
// covariance.
struct SeparabilityVerdict {
    bool separable = false;
    double threshold_t = 0.0;
    double clean_miss_rate = 0.0;  // fraction of clean rows with |proj| > t
    double poison_pass_rate = 0.0; // fraction of poison rows with |proj| < t
    std::vector<double> projection_vector;  // unit, top eigenvector of Sigma_F
    bool degenerate = false;       // single-origin sample: missing rate reported as 0
};

// Scans candidate thresholds over the sorted projection magnitudes (plus
// midpoints) and returns the t minimizing max(clean_miss_rate,
// poison_pass_rate); ties go to the smaller t.
SeparabilityVerdict check_separability(const MixtureSample& sample);

// ||mu_d - mu_w||^2 >= 6 sigma2 / eps
bool lemma1_condition(const MixtureSpec& spec);

// eps * |delta_dot_v| + sigma / sqrt(eps)
double lemma2_threshold(double delta_dot_v, double sigma, double eps);

struct CorrelationCheck {
    double lhs = 0.0;   // <v, empirical Delta>^2
    double rhs = 0.0;   // 2 sigma2 / eps
    bool holds = false; // lhs >= rhs * (1 - slack), slack = 0.1
};

inline constexpr double kCorrelationSlack = 0.1;

// Rejects single-origin samples.
CorrelationCheck lemma3_correlation_check(const MixtureSample& sample);

struct CovarianceResidual {
    double residual_fro = 0.0;   // || Sigma_F - [(1-e)Sigma_D + e Sigma_W + e(1-e) DD^T] ||_F
    double sigma_f_fro = 0.0;    // || Sigma_F ||_F, reference scale
    double relative() const { return sigma_f_fro > 0.0 ? residual_fro / sigma_f_fro : residual_fro; }
};

// Plug-in mixture covariance decomposition; an algebraic identity for
// empirical moments, so the residual is floating-point noise only.
CovarianceResidual covariance_decomposition_check(const MixtureSample& sample);

// Shared helper: top eigenvector of the empirical covariance of the sample
// (power iteration seeded from the sample's spec seed).
std::vector<double> top_mixture_eigenvector(const MixtureSample& sample);

}  // namespace spectral::robuststats
