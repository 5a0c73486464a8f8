#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <vector>

#include "capitula/error.hpp"
#include "capitula/integer.hpp"

namespace capitula {

/// Dense row-major integer matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (auto const& row : init) {
            if (row.size() != cols_) throw PreconditionError("ragged matrix literal");
            for (long long x : row) data_.emplace_back(x);
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix diagonal(std::vector<Integer> const& d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    Integer const& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Integer> column(std::size_t c) const {
        std::vector<Integer> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    std::vector<Integer> row(std::size_t r) const {
        return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
    }

    static Matrix from_columns(std::size_t rows, std::vector<std::vector<Integer>> const& cols) {
        Matrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != rows) throw PreconditionError("column length mismatch");
            for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
        }
        return m;
    }

    /// [A | B]
    static Matrix hconcat(Matrix const& a, Matrix const& b) {
        if (a.rows() != b.rows()) throw PreconditionError("hconcat: row mismatch");
        Matrix m(a.rows(), a.cols() + b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
            for (std::size_t c = 0; c < b.cols(); ++c) m(r, a.cols() + c) = b(r, c);
        }
        return m;
    }

    Matrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        Matrix m(nr, nc);
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) m(r, c) = (*this)(r0 + r, c0 + c);
        return m;
    }

    bool is_zero() const {
        for (auto const& x : data_)
            if (x != 0) return false;
        return true;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
    }
    /// row[dst] += k * row[src]
    void add_row(std::size_t dst, std::size_t src, Integer const& k) {
        if (k == 0) return;
        for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += k * (*this)(src, c);
    }
    /// col[dst] += k * col[src]
    void add_col(std::size_t dst, std::size_t src, Integer const& k) {
        if (k == 0) return;
        for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += k * (*this)(r, src);
    }
    /// (row a, row b) <- (x*a + y*b, z*a + w*b)
    void combine_rows(std::size_t a, std::size_t b, Integer const& x, Integer const& y, Integer const& z,
                      Integer const& w) {
        for (std::size_t c = 0; c < cols_; ++c) {
            Integer ra = (*this)(a, c), rb = (*this)(b, c);
            (*this)(a, c) = x * ra + y * rb;
            (*this)(b, c) = z * ra + w * rb;
        }
    }
    /// (col a, col b) <- (x*a + y*b, z*a + w*b)
    void combine_cols(std::size_t a, std::size_t b, Integer const& x, Integer const& y, Integer const& z,
                      Integer const& w) {
        for (std::size_t r = 0; r < rows_; ++r) {
            Integer ca = (*this)(r, a), cb = (*this)(r, b);
            (*this)(r, a) = x * ca + y * cb;
            (*this)(r, b) = z * ca + w * cb;
        }
    }
    void reduce_mod(Integer const& m) {
        for (auto& x : data_) x = mod(x, m);
    }

    friend Matrix operator*(Matrix const& a, Matrix const& b) {
        if (a.cols() != b.rows()) throw PreconditionError("matrix product: dimension mismatch");
        Matrix m(a.rows(), b.cols());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k) {
                if (a(i, k) == 0) continue;
                for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += a(i, k) * b(k, j);
            }
        return m;
    }
    friend std::vector<Integer> operator*(Matrix const& a, std::vector<Integer> const& v) {
        if (a.cols() != v.size()) throw PreconditionError("matrix-vector product: dimension mismatch");
        std::vector<Integer> out(a.rows());
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
        return out;
    }
    friend Matrix operator-(Matrix const& a, Matrix const& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("matrix difference: shape");
        Matrix m = a;
        for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
        return m;
    }
    friend Matrix operator+(Matrix const& a, Matrix const& b) {
        if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("matrix sum: shape");
        Matrix m = a;
        for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
        return m;
    }
    friend bool operator==(Matrix const& a, Matrix const& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    friend std::ostream& operator<<(std::ostream& os, Matrix const& m) {
        os << '[';
        for (std::size_t r = 0; r < m.rows(); ++r) {
            os << (r ? ",[" : "[");
            for (std::size_t c = 0; c < m.cols(); ++c) os << (c ? "," : "") << m(r, c);
            os << ']';
        }
        return os << ']';
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

}  // namespace capitula
