#pragma once

#include <span>
#include <vector>

#include "spectral/linalg/dense_matrix.hpp"

namespace spectral::linalg {

// Row block size for the blocked reductions. Fixed (independent of thread
// count) so that the parallel kernels evaluate the exact same floating-point
// sums as the serial reference, in the same order.
inline constexpr int kRowBlock = 256;

// Serial reference kernels. The OpenMP kernels in the parent namespace must
// produce bit-identical results; the tests enforce this.
namespace serial {

void column_means(const DenseMatrix& m, std::span<double> out);

// out = M v, one dot product per row.
void matvec(const DenseMatrix& m, std::span<const double> v, std::span<double> out);

// out = M^T w, blocked over rows with in-order combination of block partials.
void matvec_transposed(const DenseMatrix& m, std::span<const double> w, std::span<double> out);

// out = M^T (M v): the Gram operator of the (centered) matrix applied to v.
// scratch must have m.rows entries.
void gram_apply(const DenseMatrix& m, std::span<const double> v, std::span<double> scratch,
                std::span<double> out);

// out[j][k] = sum_i m[i][j]*m[i][k] / divisor (m is assumed centered).
DenseMatrix covariance(const DenseMatrix& centered, double divisor);

}  // namespace serial

// OpenMP kernels (bit-identical to the serial reference).
void column_means(const DenseMatrix& m, std::span<double> out);
void matvec(const DenseMatrix& m, std::span<const double> v, std::span<double> out);
void matvec_transposed(const DenseMatrix& m, std::span<const double> w, std::span<double> out);
void gram_apply(const DenseMatrix& m, std::span<const double> v, std::span<double> scratch,
                std::span<double> out);
DenseMatrix covariance(const DenseMatrix& centered, double divisor);

// A matrix whose columns sum to (numerically) zero, together with the column
// means that were subtracted from the original data.
struct CenteredMatrix {
    DenseMatrix matrix;
    std::vector<double> mean;
};

// Subtracts column means. Rejects empty input.
CenteredMatrix center_rows(const DenseMatrix& raw);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace spectral::linalg
