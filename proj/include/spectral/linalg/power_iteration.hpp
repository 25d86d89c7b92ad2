#pragma once

#include <cstdint>
#include <vector>

#include "spectral/linalg/kernels.hpp"

namespace spectral::linalg {

inline constexpr double kPowerTolDefault = 1e-10;
inline constexpr int kPowerMaxItersDefault = 1000;

struct SpectralResult {
    std::vector<double> top_vector;  // unit length, first nonzero coordinate positive
    double top_value = 0.0;          // largest singular value of the centered matrix
    int iterations_used = 0;
    bool converged = false;
};

// Top right singular vector of `centered` (treated as already centered) by
// power iteration on the d x d Gram operator M^T M, from a seeded random
// start. Convergence: ||v_{k+1} - s v_k|| < tol for s in {+1, -1}. A zero
// matrix yields the first basis vector with top_value 0 and converged = true;
// running out of iterations returns the current iterate with converged =
// false.
SpectralResult top_right_singular_vector(const DenseMatrix& centered,
                                         double tol = kPowerTolDefault,
                                         int max_iters = kPowerMaxItersDefault,
                                         std::uint64_t seed = 0);

SpectralResult top_right_singular_vector(const CenteredMatrix& m,
                                         double tol = kPowerTolDefault,
                                         int max_iters = kPowerMaxItersDefault,
                                         std::uint64_t seed = 0);

// k largest singular values, descending, via power iteration with deflation
// (after each extraction, sigma^2 v v^T is subtracted from the Gram operator).
std::vector<double> top_k_singular_values(const DenseMatrix& centered, int k,
                                          double tol = kPowerTolDefault,
                                          int max_iters = kPowerMaxItersDefault,
                                          std::uint64_t seed = 0);

std::vector<double> top_k_singular_values(const CenteredMatrix& m, int k,
                                          double tol = kPowerTolDefault,
                                          int max_iters = kPowerMaxItersDefault,
                                          std::uint64_t seed = 0);

}  // namespace spectral::linalg
