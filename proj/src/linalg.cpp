#include "fluxcharge/linalg.hpp"

#include <algorithm>

namespace fluxcharge {

RrefResult rref(const RationalMatrix& m) {
    RationalMatrix r = m;
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < r.cols() && pivot_row < r.rows(); ++col) {
        // Topmost nonzero row at or below pivot_row in this column.
        std::size_t sel = pivot_row;
        while (sel < r.rows() && r.at(sel, col) == 0) ++sel;
        if (sel == r.rows()) continue;
        if (sel != pivot_row) {
            for (std::size_t j = 0; j < r.cols(); ++j)
                std::swap(r.at(sel, j), r.at(pivot_row, j));
        }
        const Rational inv = Rational(1) / r.at(pivot_row, col);
        for (std::size_t j = col; j < r.cols(); ++j) r.at(pivot_row, j) *= inv;
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == pivot_row || r.at(i, col) == 0) continue;
            const Rational f = r.at(i, col);
            for (std::size_t j = col; j < r.cols(); ++j)
                r.at(i, j) -= f * r.at(pivot_row, j);
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    r.row_labels.clear();
    return {std::move(r), std::move(pivots)};
}

std::size_t rank(const RationalMatrix& m) {
    return rref(m).pivot_cols.size();
}

std::vector<RationalVector> right_nullspace(const RationalMatrix& m) {
    const auto [r, pivots] = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;

    std::vector<RationalVector> basis;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        RationalVector v(m.cols(), Rational(0));
        v[free_col] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -r.at(i, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<RationalVector> left_nullspace(const RationalMatrix& m) {
    return right_nullspace(m.transposed());
}

std::optional<AffineSolution> solve_affine(const RationalMatrix& m, const RationalVector& b) {
    if (b.size() != m.rows()) return std::nullopt;
    RationalMatrix aug(m.rows(), m.cols() + 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, m.cols()) = b[i];
    }
    const auto [r, pivots] = rref(aug);
    // Inconsistent iff a pivot lands in the augmented column.
    if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;

    AffineSolution sol;
    sol.particular.assign(m.cols(), Rational(0));
    for (std::size_t i = 0; i < pivots.size(); ++i)
        sol.particular[pivots[i]] = r.at(i, m.cols());

    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        RationalVector v(m.cols(), Rational(0));
        v[free_col] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i)
            v[pivots[i]] = -r.at(i, free_col);
        sol.homogeneous.push_back(std::move(v));
    }
    return sol;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    const std::size_t n = m.rows();
    RationalMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    const auto [r, pivots] = rref(aug);
    if (pivots.size() != n || pivots.back() != n - 1) return std::nullopt;
    RationalMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = r.at(i, n + j);
    return inv;
}

RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols() != b.cols()) throw std::invalid_argument("vstack shape mismatch");
    RationalMatrix out(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out.at(a.rows() + i, j) = b.at(i, j);
    return out;
}

RationalMatrix rows_to_matrix(const std::vector<RationalVector>& rows, std::size_t cols) {
    RationalMatrix out(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols) throw std::invalid_argument("row length mismatch");
        for (std::size_t j = 0; j < cols; ++j) out.at(i, j) = rows[i][j];
    }
    return out;
}

bool in_row_span(const RationalMatrix& m, const RationalVector& v) {
    const std::size_t base = rank(m);
    return rank(vstack(m, rows_to_matrix({v}, m.cols()))) == base;
}

} // namespace fluxcharge
