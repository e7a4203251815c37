#include "hld/matrix.hpp"

#include "hld/errors.hpp"
#include "hld/kernels.hpp"

#include <sstream>
#include <utility>

namespace hld {

void require_same_ring(const Ring& a, const Ring& b, const char* what) {
    if (!(a == b)) throw RingMismatch(std::string(what) + ": " + a.name() + " vs " + b.name());
}

ExactMatrix::ExactMatrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols) {}

ExactMatrix::ExactMatrix(Ring ring, std::size_t rows, std::size_t cols, std::vector<Scalar> entries)
    : ring_(ring), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols)
        throw DimensionError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) + " given " +
                             std::to_string(data_.size()) + " entries");
    for (auto& x : data_) ring_.normalize(x);
}

ExactMatrix ExactMatrix::identity(Ring ring, std::size_t n) {
    ExactMatrix m(ring, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

ExactMatrix ExactMatrix::from_rows(Ring ring, std::initializer_list<std::initializer_list<long>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Scalar> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("ragged matrix literal");
        for (long v : row) entries.emplace_back(v);
    }
    return {ring, r, c, std::move(entries)};
}

ExactMatrix ExactMatrix::column(Ring ring, std::initializer_list<long> entries) {
    std::vector<Scalar> e;
    for (long v : entries) e.emplace_back(v);
    return {ring, e.size(), 1, std::move(e)};
}

ExactMatrix ExactMatrix::diagonal(Ring ring, const std::vector<Scalar>& entries) {
    ExactMatrix m(ring, entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m.set(i, i, entries[i]);
    return m;
}

void ExactMatrix::set(std::size_t i, std::size_t j, Scalar v) {
    ring_.normalize(v);
    data_[i * cols_ + j] = std::move(v);
}

bool ExactMatrix::is_zero() const {
    for (const auto& x : data_)
        if (sgn(x) != 0) return false;
    return true;
}

bool ExactMatrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

ExactMatrix ExactMatrix::transpose() const {
    ExactMatrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

ExactMatrix ExactMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const {
    if (row0 + nrows > rows_ || col0 + ncols > cols_) throw DimensionError("block out of range");
    ExactMatrix b(ring_, nrows, ncols);
    for (std::size_t i = 0; i < nrows; ++i)
        for (std::size_t j = 0; j < ncols; ++j) b(i, j) = (*this)(row0 + i, col0 + j);
    return b;
}

void ExactMatrix::paste(std::size_t row0, std::size_t col0, const ExactMatrix& src) {
    require_same_ring(ring_, src.ring_, "paste");
    if (row0 + src.rows_ > rows_ || col0 + src.cols_ > cols_) throw DimensionError("paste out of range");
    for (std::size_t i = 0; i < src.rows_; ++i)
        for (std::size_t j = 0; j < src.cols_; ++j) (*this)(row0 + i, col0 + j) = src(i, j);
}

ExactMatrix ExactMatrix::scaled(const Scalar& c) const {
    ExactMatrix r = *this;
    for (auto& x : r.data_) {
        x *= c;
        ring_.normalize(x);
    }
    return r;
}

void ExactMatrix::swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
}

void ExactMatrix::swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
}

void ExactMatrix::add_row_multiple(std::size_t dst, std::size_t src, const Scalar& c) {
    if (sgn(c) == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) {
        const Scalar& s = (*this)(src, j);
        if (sgn(s) == 0) continue;
        Scalar& d = (*this)(dst, j);
        d += c * s;
        ring_.normalize(d);
    }
}

void ExactMatrix::add_col_multiple(std::size_t dst, std::size_t src, const Scalar& c) {
    if (sgn(c) == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) {
        const Scalar& s = (*this)(i, src);
        if (sgn(s) == 0) continue;
        Scalar& d = (*this)(i, dst);
        d += c * s;
        ring_.normalize(d);
    }
}

void ExactMatrix::scale_row(std::size_t r, const Scalar& c) {
    for (std::size_t j = 0; j < cols_; ++j) {
        Scalar& d = (*this)(r, j);
        d *= c;
        ring_.normalize(d);
    }
}

void ExactMatrix::scale_col(std::size_t c, const Scalar& s) {
    for (std::size_t i = 0; i < rows_; ++i) {
        Scalar& d = (*this)(i, c);
        d *= s;
        ring_.normalize(d);
    }
}

bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring_, b.ring_, "matrix sum");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("sum of differently shaped matrices");
    ExactMatrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) {
        r.data_[i] += b.data_[i];
        r.ring_.normalize(r.data_[i]);
    }
    return r;
}

ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring_, b.ring_, "matrix difference");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("difference of differently shaped matrices");
    ExactMatrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) {
        r.data_[i] -= b.data_[i];
        r.ring_.normalize(r.data_[i]);
    }
    return r;
}

ExactMatrix operator-(const ExactMatrix& a) {
    ExactMatrix r = a;
    for (auto& x : r.data_) {
        x = -x;
        r.ring_.normalize(x);
    }
    return r;
}

ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
    if (a.rows_ * a.cols_ * b.cols_ >= kernels::parallel_threshold && kernels::thread_count() > 1)
        return kernels::multiply_parallel(a, b);
    return kernels::multiply_serial(a, b);
}

std::string ExactMatrix::to_string() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        out << (i ? "; " : "");
        for (std::size_t j = 0; j < cols_; ++j) out << (j ? " " : "") << ring_.format((*this)(i, j));
    }
    out << "] (" << rows_ << "x" << cols_ << ")";
    return out.str();
}

ExactMatrix hstack(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring(), b.ring(), "hstack");
    if (a.rows() != b.rows()) throw DimensionError("hstack row mismatch");
    ExactMatrix r(a.ring(), a.rows(), a.cols() + b.cols());
    r.paste(0, 0, a);
    r.paste(0, a.cols(), b);
    return r;
}

ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring(), b.ring(), "vstack");
    if (a.cols() != b.cols()) throw DimensionError("vstack column mismatch");
    ExactMatrix r(a.ring(), a.rows() + b.rows(), a.cols());
    r.paste(0, 0, a);
    r.paste(a.rows(), 0, b);
    return r;
}

ExactMatrix block_diagonal(const ExactMatrix& a, const ExactMatrix& b) {
    require_same_ring(a.ring(), b.ring(), "block_diagonal");
    ExactMatrix r(a.ring(), a.rows() + b.rows(), a.cols() + b.cols());
    r.paste(0, 0, a);
    r.paste(a.rows(), a.cols(), b);
    return r;
}

} // namespace hld
