#pragma once

#include "hld/ring.hpp"

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace hld {

/// Dense matrix over a Ring, row-major. 0 x n and n x 0 are legal values.
class ExactMatrix {
public:
    ExactMatrix() : ring_(Ring::integers()) {}
    ExactMatrix(Ring ring, std::size_t rows, std::size_t cols);
    ExactMatrix(Ring ring, std::size_t rows, std::size_t cols, std::vector<Scalar> entries);

    static ExactMatrix zero(Ring ring, std::size_t rows, std::size_t cols) { return {ring, rows, cols}; }
    static ExactMatrix identity(Ring ring, std::size_t n);
    /// Convenience for tests and literals; entries are reduced into the ring.
    static ExactMatrix from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows);
    /// Column vector.
    static ExactMatrix column(Ring ring, std::initializer_list<long> entries);
    /// Square diagonal matrix.
    static ExactMatrix diagonal(Ring ring, const std::vector<Scalar>& entries);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    /// Assigns v reduced into the ring.
    void set(std::size_t i, std::size_t j, Scalar v);
    const std::vector<Scalar>& entries() const noexcept { return data_; }

    bool is_zero() const;
    bool is_identity() const;

    ExactMatrix transpose() const;
    ExactMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
    ExactMatrix columns(std::size_t col0, std::size_t ncols) const { return block(0, col0, rows_, ncols); }
    ExactMatrix row_range(std::size_t row0, std::size_t nrows) const { return block(row0, 0, nrows, cols_); }
    /// Copies src into this matrix with its top-left corner at (row0, col0).
    void paste(std::size_t row0, std::size_t col0, const ExactMatrix& src);

    ExactMatrix scaled(const Scalar& c) const;

    // Elementary operations, used by the normal-form routines.
    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    /// row[dst] += c * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Scalar& c);
    /// col[dst] += c * col[src]
    void add_col_multiple(std::size_t dst, std::size_t src, const Scalar& c);
    void scale_row(std::size_t r, const Scalar& c);
    void scale_col(std::size_t c, const Scalar& s);

    friend bool operator==(const ExactMatrix& a, const ExactMatrix& b);
    friend ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b);
    friend ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b);
    friend ExactMatrix operator-(const ExactMatrix& a);
    /// Dispatches to the parallel kernel for large products.
    friend ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b);

    std::string to_string() const;

private:
    Ring ring_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Scalar> data_;
};

ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b);
ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b);
/// Block-diagonal [[a, 0], [0, b]].
ExactMatrix block_diagonal(const ExactMatrix& a, const ExactMatrix& b);

/// Throws RingMismatch when the rings differ.
void require_same_ring(const Ring& a, const Ring& b, const char* what);

} // namespace hld
