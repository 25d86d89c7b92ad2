#include "spectral/linalg/power_iteration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral/rng.hpp"

namespace spectral::linalg {

namespace {

// Flip sign so the first nonzero coordinate is positive.
void fix_sign(std::vector<double>& v) {
    for (double x : v) {
        if (x != 0.0) {
            if (x < 0.0)
                for (double& y : v) y = -y;
            return;
        }
    }
}

void normalize(std::vector<double>& v) {
    const double n = norm2(v);
    for (double& x : v) x /= n;
}

// One deflated pair found so far.
struct Deflated {
    std::vector<double> vec;
    double lambda;  // eigenvalue of M^T M along vec
};

// y = (M^T M - sum lambda_m v_m v_m^T) v
void deflated_apply(const DenseMatrix& m, const std::vector<Deflated>& found,
                    std::span<const double> v, std::span<double> scratch,
                    std::span<double> out) {
    gram_apply(m, v, scratch, out);
    for (const auto& f : found) {
        const double c = f.lambda * dot(f.vec, v);
        for (std::size_t j = 0; j < out.size(); ++j) out[j] -= c * f.vec[j];
    }
}

void orthogonalize(std::vector<double>& v, const std::vector<Deflated>& found) {
    for (const auto& f : found) {
        const double c = dot(f.vec, v);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * f.vec[j];
    }
}

// Deterministic unit start vector orthogonal to the found set; falls back to
// basis vectors if the seeded random start degenerates.
std::vector<double> start_vector(int d, std::uint64_t seed, const std::vector<Deflated>& found) {
    Rng rng(splitmix64(seed));
    std::vector<double> v(d);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    orthogonalize(v, found);
    if (norm2(v) > 1e-8) {
        normalize(v);
        return v;
    }
    for (int j = 0; j < d; ++j) {
        std::fill(v.begin(), v.end(), 0.0);
        v[j] = 1.0;
        orthogonalize(v, found);
        if (norm2(v) > 1e-8) {
            normalize(v);
            return v;
        }
    }
    // found set already spans R^d; caller handles via zero operator path
    std::fill(v.begin(), v.end(), 0.0);
    if (d > 0) v[0] = 1.0;
    return v;
}

SpectralResult power_iterate(const DenseMatrix& m, const std::vector<Deflated>& found,
                             double tol, int max_iters, std::uint64_t seed) {
    if (m.cols < 1) throw std::invalid_argument("power iteration: matrix has no columns");
    if (tol <= 0.0) throw std::invalid_argument("power iteration: tol must be positive");
    if (max_iters < 1) throw std::invalid_argument("power iteration: max_iters must be >= 1");

    const int d = m.cols;
    SpectralResult res;
    std::vector<double> v = start_vector(d, seed, found);
    std::vector<double> next(d);
    std::vector<double> scratch(std::max(m.rows, 1));

    for (int it = 0; it < max_iters; ++it) {
        deflated_apply(m, found, v, scratch, next);
        const double nrm = norm2(next);
        res.iterations_used = it + 1;
        if (nrm == 0.0) {
            // operator annihilates the iterate: zero (or fully deflated)
            // matrix; report the first basis vector not spanned by `found`
            res.top_vector.assign(d, 0.0);
            for (int j = 0; j < d; ++j) {
                std::vector<double> e(d, 0.0);
                e[j] = 1.0;
                orthogonalize(e, found);
                if (norm2(e) > 1e-8) {
                    normalize(e);
                    res.top_vector = e;
                    break;
                }
            }
            if (norm2(res.top_vector) == 0.0 && d > 0) res.top_vector[0] = 1.0;
            res.top_value = 0.0;
            res.converged = true;
            fix_sign(res.top_vector);
            return res;
        }
        for (int j = 0; j < d; ++j) next[j] /= nrm;
        double dminus = 0.0, dplus = 0.0;
        for (int j = 0; j < d; ++j) {
            const double a = next[j] - v[j];
            const double b = next[j] + v[j];
            dminus += a * a;
            dplus += b * b;
        }
        v = next;
        if (std::sqrt(std::min(dminus, dplus)) < tol) {
            res.converged = true;
            break;
        }
    }
    res.top_vector = v;
    // scrub residual components along already-extracted directions so the
    // singular value below is taken in the orthogonal complement
    orthogonalize(res.top_vector, found);
    const double n = norm2(res.top_vector);
    if (n > 1e-12)
        for (double& x : res.top_vector) x /= n;
    fix_sign(res.top_vector);
    if (m.rows > 0) {
        matvec(m, res.top_vector, scratch);
        res.top_value = norm2(std::span<const double>(scratch.data(), m.rows));
    } else {
        res.top_value = 0.0;
    }
    return res;
}

}  // namespace

SpectralResult top_right_singular_vector(const DenseMatrix& centered, double tol, int max_iters,
                                         std::uint64_t seed) {
    return power_iterate(centered, {}, tol, max_iters, seed);
}

SpectralResult top_right_singular_vector(const CenteredMatrix& m, double tol, int max_iters,
                                         std::uint64_t seed) {
    return top_right_singular_vector(m.matrix, tol, max_iters, seed);
}

std::vector<double> top_k_singular_values(const DenseMatrix& centered, int k, double tol,
                                          int max_iters, std::uint64_t seed) {
    if (k < 1 || k > centered.cols)
        throw std::invalid_argument("top_k_singular_values: k out of range");
    std::vector<Deflated> found;
    std::vector<double> values;
    values.reserve(k);
    for (int i = 0; i < k; ++i) {
        const std::uint64_t s = (i == 0) ? seed : derive_seed(seed, static_cast<std::uint64_t>(i));
        SpectralResult r = power_iterate(centered, found, tol, max_iters, s);
        values.push_back(r.top_value);
        found.push_back({r.top_vector, r.top_value * r.top_value});
    }
    std::sort(values.begin(), values.end(), std::greater<double>());
    return values;
}

std::vector<double> top_k_singular_values(const CenteredMatrix& m, int k, double tol,
                                          int max_iters, std::uint64_t seed) {
    return top_k_singular_values(m.matrix, k, tol, max_iters, seed);
}

}  // namespace spectral::linalg
