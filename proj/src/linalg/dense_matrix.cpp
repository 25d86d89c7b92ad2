#include "spectral/linalg/dense_matrix.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spectral::linalg {

DenseMatrix::DenseMatrix(int rows_, int cols_) : rows(rows_), cols(cols_) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
    data.assign(static_cast<std::size_t>(rows) * cols, 0.0);
}

DenseMatrix::DenseMatrix(int rows_, int cols_, std::vector<double> values)
    : rows(rows_), cols(cols_), data(std::move(values)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("DenseMatrix: negative dimension");
    if (data.size() != static_cast<std::size_t>(rows) * cols)
        throw std::invalid_argument("DenseMatrix: data length does not match rows*cols");
    check_finite();
}

DenseMatrix DenseMatrix::from_rows(const std::vector<std::vector<double>>& rows_) {
    const int r = static_cast<int>(rows_.size());
    const int c = r > 0 ? static_cast<int>(rows_[0].size()) : 0;
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(r) * c);
    for (const auto& row : rows_) {
        if (static_cast<int>(row.size()) != c)
            throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(flat));
}

void DenseMatrix::check_finite() const {
    for (double v : data)
        if (!std::isfinite(v)) throw std::invalid_argument("DenseMatrix: non-finite entry");
}

void save_matrix_text(const DenseMatrix& m, std::ostream& out) {
    out << m.rows << " " << m.cols << "\n";
    char buf[40];
    for (int r = 0; r < m.rows; ++r) {
        for (int c = 0; c < m.cols; ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.at(r, c));
            out << (c ? " " : "") << buf;
        }
        out << "\n";
    }
}

void save_matrix_text(const DenseMatrix& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_matrix_text: cannot open " + path);
    save_matrix_text(m, out);
}

DenseMatrix load_matrix_text(std::istream& in) {
    int rows = 0, cols = 0;
    if (!(in >> rows >> cols)) throw std::runtime_error("load_matrix_text: bad header");
    if (rows < 0 || cols < 0) throw std::runtime_error("load_matrix_text: negative dimension");
    std::vector<double> data(static_cast<std::size_t>(rows) * cols);
    for (double& v : data)
        if (!(in >> v)) throw std::runtime_error("load_matrix_text: truncated data");
    return DenseMatrix(rows, cols, std::move(data));
}

DenseMatrix load_matrix_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix_text: cannot open " + path);
    return load_matrix_text(in);
}

}  // namespace spectral::linalg
