#include "dilation/exact_matrix.hpp"

#include <sstream>
#include <stdexcept>

namespace dilation {

QuadMatrix QuadMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                             std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_)
        throw std::out_of_range("QuadMatrix::block out of range");
    QuadMatrix out(nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
    return out;
}

std::vector<QuadScalar> QuadMatrix::apply(const std::vector<QuadScalar>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("QuadMatrix::apply: size mismatch");
    std::vector<QuadScalar> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

QuadMatrix operator-(const QuadMatrix& a, const QuadMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("QuadMatrix: shape mismatch");
    QuadMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
    return out;
}

std::vector<std::vector<QuadScalar>> kernel_basis(QuadMatrix a) {
    std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a(pivot, col).is_zero()) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(pivot, j), a(rank, j));
        QuadScalar inv = a(rank, col).inverse();
        for (std::size_t j = col; j < cols; ++j) a(rank, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a(i, col).is_zero()) continue;
            QuadScalar factor = a(i, col);
            for (std::size_t j = col; j < cols; ++j) a(i, j) -= factor * a(rank, j);
        }
        pivot_col.push_back(col);
        ++rank;
    }

    std::vector<bool> is_pivot(cols, false);
    for (std::size_t c : pivot_col) is_pivot[c] = true;

    std::vector<std::vector<QuadScalar>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        std::vector<QuadScalar> v(cols);
        v[free] = QuadScalar(1);
        for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a(r, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

QuadScalar determinant(QuadMatrix a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("determinant: matrix not square");
    std::size_t n = a.rows();
    QuadScalar det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a(pivot, col).is_zero()) ++pivot;
        if (pivot == n) return QuadScalar();
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
            det = -det;
        }
        det *= a(col, col);
        QuadScalar inv = a(col, col).inverse();
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a(i, col).is_zero()) continue;
            QuadScalar factor = a(i, col) * inv;
            for (std::size_t j = col; j < n; ++j) a(i, j) -= factor * a(col, j);
        }
    }
    return det;
}

std::vector<QuadScalar> column_sums(const QuadMatrix& a) {
    std::vector<QuadScalar> sums(a.cols());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) sums[j] += a(i, j);
    return sums;
}

std::string matrix_to_csv(const QuadMatrix& a) {
    std::ostringstream out;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (j) out << ",";
            out << a(i, j).to_string();
        }
        out << "\n";
    }
    return out.str();
}

QuadMatrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<QuadScalar>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<QuadScalar> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) row.push_back(QuadScalar::parse(cell));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return QuadMatrix();
    QuadMatrix out(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw std::invalid_argument("matrix CSV has ragged rows");
        for (std::size_t j = 0; j < rows[i].size(); ++j) out(i, j) = rows[i][j];
    }
    return out;
}

}  // namespace dilation
