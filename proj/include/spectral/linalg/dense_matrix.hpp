#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace spectral::linalg {

// Row-major dense matrix of doubles. Entries must be finite; the checked
// constructors reject NaN/Inf.
struct DenseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;  // rows * cols, row-major

    DenseMatrix() = default;

    // Zero-initialized rows x cols.
    DenseMatrix(int rows_, int cols_);

    // Takes ownership of `values` (must have rows*cols finite entries).
    DenseMatrix(int rows_, int cols_, std::vector<double> values);

    static DenseMatrix from_rows(const std::vector<std::vector<double>>& rows_);

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }

    std::span<const double> row(int r) const {
        return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
    }
    std::span<double> row(int r) {
        return {data.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)};
    }

    bool same_shape(const DenseMatrix& o) const { return rows == o.rows && cols == o.cols; }

    // Throws if any entry is NaN or Inf.
    void check_finite() const;
};

// Plain-text serialization: first line "rows cols", then one line per row of
// space-separated values printed with 17 significant digits (round-trip exact).
void save_matrix_text(const DenseMatrix& m, std::ostream& out);
void save_matrix_text(const DenseMatrix& m, const std::string& path);
DenseMatrix load_matrix_text(std::istream& in);
DenseMatrix load_matrix_text(const std::string& path);

}  // namespace spectral::linalg
