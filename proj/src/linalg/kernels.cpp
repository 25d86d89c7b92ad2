#include "spectral/linalg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spectral::linalg {

namespace {

inline void check_span(std::size_t got, std::size_t want, const char* what) {
    if (got != want) throw std::invalid_argument(std::string(what) + ": wrong span length");
}

inline int num_blocks(int rows) { return (rows + kRowBlock - 1) / kRowBlock; }

// Partial column sums of rows [r0, r1); row-major friendly accumulation.
inline void block_colsum(const DenseMatrix& m, int r0, int r1, double* partial) {
    const int d = m.cols;
    for (int j = 0; j < d; ++j) partial[j] = 0.0;
    for (int i = r0; i < r1; ++i) {
        const double* row = m.data.data() + static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) partial[j] += row[j];
    }
}

// Partial of M^T w over rows [r0, r1).
inline void block_matvec_t(const DenseMatrix& m, const double* w, int r0, int r1,
                           double* partial) {
    const int d = m.cols;
    for (int j = 0; j < d; ++j) partial[j] = 0.0;
    for (int i = r0; i < r1; ++i) {
        const double* row = m.data.data() + static_cast<std::size_t>(i) * d;
        const double wi = w[i];
        for (int j = 0; j < d; ++j) partial[j] += wi * row[j];
    }
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    check_span(b.size(), a.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// ---------------------------------------------------------------------------
// serial reference
// ---------------------------------------------------------------------------

namespace serial {

void column_means(const DenseMatrix& m, std::span<double> out) {
    check_span(out.size(), static_cast<std::size_t>(m.cols), "column_means");
    if (m.rows == 0) throw std::invalid_argument("column_means: empty matrix");
    const int nb = num_blocks(m.rows);
    std::vector<double> partial(m.cols);
    std::vector<double> total(m.cols, 0.0);
    for (int b = 0; b < nb; ++b) {
        const int r0 = b * kRowBlock;
        const int r1 = std::min(m.rows, r0 + kRowBlock);
        block_colsum(m, r0, r1, partial.data());
        for (int j = 0; j < m.cols; ++j) total[j] += partial[j];
    }
    for (int j = 0; j < m.cols; ++j) out[j] = total[j] / m.rows;
}

void matvec(const DenseMatrix& m, std::span<const double> v, std::span<double> out) {
    check_span(v.size(), static_cast<std::size_t>(m.cols), "matvec v");
    check_span(out.size(), static_cast<std::size_t>(m.rows), "matvec out");
    for (int i = 0; i < m.rows; ++i) out[i] = dot(m.row(i), v);
}

void matvec_transposed(const DenseMatrix& m, std::span<const double> w, std::span<double> out) {
    check_span(w.size(), static_cast<std::size_t>(m.rows), "matvec_transposed w");
    check_span(out.size(), static_cast<std::size_t>(m.cols), "matvec_transposed out");
    const int nb = num_blocks(m.rows);
    std::vector<double> partial(m.cols);
    for (int j = 0; j < m.cols; ++j) out[j] = 0.0;
    for (int b = 0; b < nb; ++b) {
        const int r0 = b * kRowBlock;
        const int r1 = std::min(m.rows, r0 + kRowBlock);
        block_matvec_t(m, w.data(), r0, r1, partial.data());
        for (int j = 0; j < m.cols; ++j) out[j] += partial[j];
    }
}

void gram_apply(const DenseMatrix& m, std::span<const double> v, std::span<double> scratch,
                std::span<double> out) {
    serial::matvec(m, v, scratch);
    serial::matvec_transposed(m, scratch, out);
}

DenseMatrix covariance(const DenseMatrix& centered, double divisor) {
    const int d = centered.cols;
    DenseMatrix cov(d, d);
    for (int j = 0; j < d; ++j) {
        for (int k = j; k < d; ++k) {
            double s = 0.0;
            for (int i = 0; i < centered.rows; ++i)
                s += centered.at(i, j) * centered.at(i, k);
            s /= divisor;
            cov.at(j, k) = s;
            cov.at(k, j) = s;
        }
    }
    return cov;
}

}  // namespace serial

// ---------------------------------------------------------------------------
// OpenMP kernels: same block structure and combination order as the serial
// reference, so results match bit for bit at any thread count.
// ---------------------------------------------------------------------------

void column_means(const DenseMatrix& m, std::span<double> out) {
    check_span(out.size(), static_cast<std::size_t>(m.cols), "column_means");
    if (m.rows == 0) throw std::invalid_argument("column_means: empty matrix");
    const int nb = num_blocks(m.rows);
    std::vector<double> partials(static_cast<std::size_t>(nb) * m.cols);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nb; ++b) {
        const int r0 = b * kRowBlock;
        const int r1 = std::min(m.rows, r0 + kRowBlock);
        block_colsum(m, r0, r1, partials.data() + static_cast<std::size_t>(b) * m.cols);
    }
    std::vector<double> total(m.cols, 0.0);
    for (int b = 0; b < nb; ++b) {
        const double* p = partials.data() + static_cast<std::size_t>(b) * m.cols;
        for (int j = 0; j < m.cols; ++j) total[j] += p[j];
    }
    for (int j = 0; j < m.cols; ++j) out[j] = total[j] / m.rows;
}

void matvec(const DenseMatrix& m, std::span<const double> v, std::span<double> out) {
    check_span(v.size(), static_cast<std::size_t>(m.cols), "matvec v");
    check_span(out.size(), static_cast<std::size_t>(m.rows), "matvec out");
    const int n = m.rows;
#pragma omp parallel for schedule(static) if (n > 64)
    for (int i = 0; i < n; ++i) out[i] = dot(m.row(i), v);
}

void matvec_transposed(const DenseMatrix& m, std::span<const double> w, std::span<double> out) {
    check_span(w.size(), static_cast<std::size_t>(m.rows), "matvec_transposed w");
    check_span(out.size(), static_cast<std::size_t>(m.cols), "matvec_transposed out");
    const int nb = num_blocks(m.rows);
    std::vector<double> partials(static_cast<std::size_t>(nb) * m.cols);
#pragma omp parallel for schedule(static)
    for (int b = 0; b < nb; ++b) {
        const int r0 = b * kRowBlock;
        const int r1 = std::min(m.rows, r0 + kRowBlock);
        block_matvec_t(m, w.data(), r0, r1,
                       partials.data() + static_cast<std::size_t>(b) * m.cols);
    }
    for (int j = 0; j < m.cols; ++j) out[j] = 0.0;
    for (int b = 0; b < nb; ++b) {
        const double* p = partials.data() + static_cast<std::size_t>(b) * m.cols;
        for (int j = 0; j < m.cols; ++j) out[j] += p[j];
    }
}

void gram_apply(const DenseMatrix& m, std::span<const double> v, std::span<double> scratch,
                std::span<double> out) {
    matvec(m, v, scratch);
    matvec_transposed(m, scratch, out);
}

DenseMatrix covariance(const DenseMatrix& centered, double divisor) {
    const int d = centered.cols;
    DenseMatrix cov(d, d);
    const int pairs = d * (d + 1) / 2;
#pragma omp parallel for schedule(static)
    for (int p = 0; p < pairs; ++p) {
        // unrank p -> (j, k) with j <= k
        int j = 0;
        int rem = p;
        while (rem >= d - j) {
            rem -= d - j;
            ++j;
        }
        const int k = j + rem;
        double s = 0.0;
        for (int i = 0; i < centered.rows; ++i) s += centered.at(i, j) * centered.at(i, k);
        s /= divisor;
        cov.at(j, k) = s;
        cov.at(k, j) = s;
    }
    return cov;
}

CenteredMatrix center_rows(const DenseMatrix& raw) {
    if (raw.rows < 1) throw std::invalid_argument("center_rows: matrix has no rows");
    CenteredMatrix out;
    out.mean.resize(raw.cols);
    column_means(raw, out.mean);
    out.matrix = DenseMatrix(raw.rows, raw.cols);
    const int n = raw.rows, d = raw.cols;
#pragma omp parallel for schedule(static) if (n > 64)
    for (int i = 0; i < n; ++i) {
        const double* src = raw.data.data() + static_cast<std::size_t>(i) * d;
        double* dst = out.matrix.data.data() + static_cast<std::size_t>(i) * d;
        for (int j = 0; j < d; ++j) dst[j] = src[j] - out.mean[j];
    }
    return out;
}

}  // namespace spectral::linalg
