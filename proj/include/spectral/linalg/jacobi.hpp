#pragma once

#include "spectral/linalg/dense_matrix.hpp"

#include <vector>

namespace spectral::linalg {

struct EigenDecomposition {
    std::vector<double> values;  // descending
    DenseMatrix vectors;         // column i pairs with values[i]; orthonormal
};

// Full eigen-decomposition of a small symmetric matrix by cyclic Jacobi
// rotations, iterated until the off-diagonal Frobenius norm drops below
// max(1e-12, 1e-15 * ||A||_F). Rejects asymmetric input (tolerance 1e-10)
// and dimensions above 64. Test oracle for the power-iteration path; shares
// no code with it.
EigenDecomposition exact_eigen_oracle(const DenseMatrix& gram);

}  // namespace spectral::linalg
