#pragma once

#include "fluxcharge/matrix.hpp"

#include <optional>
#include <vector>

namespace fluxcharge {

/// Result of Gauss-Jordan elimination: the fully reduced matrix plus the
/// pivot column of each nonzero row, in row order.
struct RrefResult {
    RationalMatrix reduced;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form with deterministic pivoting: the pivot is always
/// the leftmost nonzero column, and within it the topmost nonzero row among
/// those not yet used.
RrefResult rref(const RationalMatrix& m);

std::size_t rank(const RationalMatrix& m);

/// Basis of { x : m x = 0 }. One vector per free column, in ascending column
/// order; the free coordinate itself is set to one.
std::vector<RationalVector> right_nullspace(const RationalMatrix& m);

/// Basis of { y : y^T m = 0 }.
std::vector<RationalVector> left_nullspace(const RationalMatrix& m);

/// Solution of m x = b: a particular solution (free variables set to zero)
/// plus a homogeneous basis, or std::nullopt when inconsistent.
struct AffineSolution {
    RationalVector particular;
    std::vector<RationalVector> homogeneous;
};
std::optional<AffineSolution> solve_affine(const RationalMatrix& m, const RationalVector& b);

/// Inverse of a square matrix; std::nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Rank of the stack [a; b] — used for exact span comparisons.
RationalMatrix vstack(const RationalMatrix& a, const RationalMatrix& b);

/// Pack a list of row vectors into a matrix (rows must agree in length).
RationalMatrix rows_to_matrix(const std::vector<RationalVector>& rows, std::size_t cols);

/// True when `v` lies in the row space of `m`.
bool in_row_span(const RationalMatrix& m, const RationalVector& v);

} // namespace fluxcharge
