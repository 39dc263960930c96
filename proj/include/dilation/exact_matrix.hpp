#pragma once

#include "dilation/quad_scalar.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace dilation {

/// Dense matrix of exact quadratic-field scalars.
class QuadMatrix {
public:
    QuadMatrix() = default;
    QuadMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static QuadMatrix identity(std::size_t n) {
        QuadMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = QuadScalar(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    QuadScalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const QuadScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    QuadMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;

    std::vector<QuadScalar> apply(const std::vector<QuadScalar>& v) const;

    friend bool operator==(const QuadMatrix&, const QuadMatrix&) = default;

    friend QuadMatrix operator-(const QuadMatrix& a, const QuadMatrix& b);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<QuadScalar> data_;
};

/// Exact basis of the right kernel { v : A v = 0 }, via Gauss-Jordan
/// elimination over the quadratic field with first-nonzero pivoting.
/// Deterministic; an empty result means the kernel is trivial.
std::vector<std::vector<QuadScalar>> kernel_basis(QuadMatrix a);

/// Exact determinant (square matrices).
QuadScalar determinant(QuadMatrix a);

std::vector<QuadScalar> column_sums(const QuadMatrix& a);

/// Row-major CSV of scalar-grammar strings; round-trips bit-exactly.
std::string matrix_to_csv(const QuadMatrix& a);
QuadMatrix matrix_from_csv(const std::string& text);

}  // namespace dilation
