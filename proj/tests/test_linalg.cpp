#include "fluxcharge/linalg.hpp"
#include "fluxcharge/rational.hpp"

#include "support/fixtures.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fluxcharge;
using fluxcharge::testing::rational_matrix;

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("0.25") == Rational(1, 4));
    CHECK(parse_rational("-7/3") == Rational(-7, 3));
    CHECK(parse_rational("1e-3") == Rational(1, 1000));
    CHECK(parse_rational("2.5e2") == Rational(250));
    CHECK(to_string(Rational(-7, 3)) == "-7/3");
    CHECK(to_string(Rational(4)) == "4");
    CHECK(to_double(Rational(1, 2)) == 0.5);
}

TEST_CASE("rref reduces deterministically and reports pivots") {
    const RationalMatrix m = rational_matrix("1 2 3 1; 2 4 7 3; 1 2 4 2");
    const RrefResult r = rref(m);
    CHECK(r.reduced == rational_matrix("1 2 0 -2; 0 0 1 1; 0 0 0 0"));
    CHECK(r.pivot_cols == std::vector<std::size_t>{0, 2});
    CHECK(rank(m) == 2);
}

TEST_CASE("right nullspace basis sets each free coordinate to one, ascending") {
    const RationalMatrix m = rational_matrix("1 2 3 1; 2 4 7 3; 1 2 4 2");
    const std::vector<RationalVector> basis = right_nullspace(m);
    REQUIRE(basis.size() == 2);
    CHECK(basis[0] == RationalVector{-2, 1, 0, 0});
    CHECK(basis[1] == RationalVector{2, 0, -1, 1});
    for (const RationalVector& n : basis) {
        const RationalVector image = m * n;
        for (const Rational& x : image) CHECK(x == 0);
    }
}

TEST_CASE("left nullspace vectors annihilate from the left") {
    const RationalMatrix m = rational_matrix("1 1; 2 2; 0 1");
    const std::vector<RationalVector> basis = left_nullspace(m);
    REQUIRE(basis.size() == 1);
    for (std::size_t c = 0; c < m.cols(); ++c) CHECK(dot(basis[0], m.col(c)) == 0);
}

TEST_CASE("solve_affine returns the particular solution with free variables zero") {
    const RationalMatrix m = rational_matrix("1 2 3 1; 2 4 7 3; 1 2 4 2");
    const auto solution = solve_affine(m, RationalVector{1, 3, 2});
    REQUIRE(solution.has_value());
    CHECK(solution->particular == RationalVector{-2, 0, 1, 0});
    CHECK(solution->homogeneous.size() == 2);
    CHECK_FALSE(solve_affine(m, RationalVector{1, 3, 3}).has_value());
}

TEST_CASE("inverse is exact and refuses singular input") {
    const auto inv = inverse(rational_matrix("2 1; 1 1"));
    REQUIRE(inv.has_value());
    CHECK(*inv == rational_matrix("1 -1; -1 2"));
    CHECK_FALSE(inverse(rational_matrix("1 2; 2 4")).has_value());

    const RationalMatrix fractions = rational_matrix("1/2 1/3; 1/4 1");
    const auto finv = inverse(fractions);
    REQUIRE(finv.has_value());
    CHECK(fractions * *finv == RationalMatrix::identity(2));
}

TEST_CASE("row span membership and stacking") {
    const RationalMatrix rows = rational_matrix("1 0 1; 0 1 1");
    CHECK(in_row_span(rows, RationalVector{2, 3, 5}));
    CHECK_FALSE(in_row_span(rows, RationalVector{1, 1, 1}));

    const RationalMatrix stacked = vstack(rows, rational_matrix("1 1 2"));
    CHECK(stacked.rows() == 3);
    CHECK(rank(stacked) == 2);

    const RationalMatrix rebuilt =
        rows_to_matrix({RationalVector{1, 0, 1}, RationalVector{0, 1, 1}}, 3);
    CHECK(rebuilt == rows);
}
