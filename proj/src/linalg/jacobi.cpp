#include "spectral/linalg/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace spectral::linalg {

namespace {

double off_diagonal_frobenius(const DenseMatrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < a.cols; ++j)
            if (i != j) s += a.at(i, j) * a.at(i, j);
    return std::sqrt(s);
}

double frobenius(const DenseMatrix& a) {
    double s = 0.0;
    for (double v : a.data) s += v * v;
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition exact_eigen_oracle(const DenseMatrix& gram) {
    const int d = gram.rows;
    if (d != gram.cols) throw std::invalid_argument("exact_eigen_oracle: matrix not square");
    if (d > 64) throw std::invalid_argument("exact_eigen_oracle: dimension above 64");
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j)
            if (std::abs(gram.at(i, j) - gram.at(j, i)) > 1e-10)
                throw std::invalid_argument("exact_eigen_oracle: matrix not symmetric");

    DenseMatrix a = gram;
    DenseMatrix v(d, d);
    for (int i = 0; i < d; ++i) v.at(i, i) = 1.0;

    const double stop = std::max(1e-12, 1e-15 * frobenius(a));
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_frobenius(a) >= stop; ++sweep) {
        for (int p = 0; p < d - 1; ++p) {
            for (int q = p + 1; q < d; ++q) {
                const double apq = a.at(p, q);
                if (apq == 0.0) continue;
                const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J for the (p, q) rotation
                for (int k = 0; k < d; ++k) {
                    const double akp = a.at(k, p);
                    const double akq = a.at(k, q);
                    a.at(k, p) = c * akp - s * akq;
                    a.at(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < d; ++k) {
                    const double apk = a.at(p, k);
                    const double aqk = a.at(q, k);
                    a.at(p, k) = c * apk - s * aqk;
                    a.at(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < d; ++k) {
                    const double vkp = v.at(k, p);
                    const double vkq = v.at(k, q);
                    v.at(k, p) = c * vkp - s * vkq;
                    v.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return a.at(i, i) > a.at(j, j); });

    EigenDecomposition out;
    out.values.resize(d);
    out.vectors = DenseMatrix(d, d);
    for (int c = 0; c < d; ++c) {
        out.values[c] = a.at(order[c], order[c]);
        // first-nonzero-positive sign convention per column
        int lead = -1;
        for (int r = 0; r < d; ++r)
            if (v.at(r, order[c]) != 0.0) {
                lead = r;
                break;
            }
        const double flip = (lead >= 0 && v.at(lead, order[c]) < 0.0) ? -1.0 : 1.0;
        for (int r = 0; r < d; ++r) out.vectors.at(r, c) = flip * v.at(r, order[c]);
    }
    return out;
}

}  // namespace spectral::linalg
