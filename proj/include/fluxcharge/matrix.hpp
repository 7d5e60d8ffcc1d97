#pragma once

#include "fluxcharge/rational.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fluxcharge {

using RationalVector = std::vector<Rational>;

/// Dense matrix of exact rationals with optional row/column labels.
/// All operations are pure: they return fresh matrices and never mutate
/// their inputs.
class RationalMatrix {
public:
    RationalMatrix() = default;

    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument("matrix data size does not match shape");
        }
    }

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    [[nodiscard]] const Rational& at(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }
    Rational& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;

    [[nodiscard]] RationalMatrix transposed() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        t.row_labels = col_labels;
        t.col_labels = row_labels;
        return t;
    }

    [[nodiscard]] RationalVector row(std::size_t r) const {
        RationalVector v(cols_);
        for (std::size_t c = 0; c < cols_; ++c) v[c] = at(r, c);
        return v;
    }

    [[nodiscard]] RationalVector col(std::size_t c) const {
        RationalVector v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
        return v;
    }

    [[nodiscard]] bool is_zero() const {
        for (const auto& x : data_)
            if (x != 0) return false;
        return true;
    }

    friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
RationalMatrix operator-(const RationalMatrix& a);
RationalMatrix operator*(const Rational& s, const RationalMatrix& a);

RationalVector operator*(const RationalMatrix& a, const RationalVector& x);

Rational dot(const RationalVector& a, const RationalVector& b);

} // namespace fluxcharge
