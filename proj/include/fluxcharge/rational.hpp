#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <string>

namespace fluxcharge {

/// Arbitrary-precision rational scalar used throughout the library.
/// All linear algebra, reduction, and loop bookkeeping is exact; conversion
/// to double happens only at the dynamics boundary.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// Parse a rational from a string. Accepts "p", "p/q", plain decimals
/// ("-0.25") and scientific decimals ("1e-3", "2.5E2"), all converted
/// exactly. Returns std::nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(const std::string& text);

/// Canonical short rendering: "p" when the denominator is one, else "p/q".
std::string to_string(const Rational& value);

/// Lossy conversion for the dynamics boundary.
double to_double(const Rational& value);

} // namespace fluxcharge
