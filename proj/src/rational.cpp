#include "fluxcharge/rational.hpp"

#include <cctype>
#include <cstdlib>

namespace fluxcharge {

namespace {

bool parse_integer(const std::string& text, Integer& out) {
    if (text.empty()) return false;
    const bool negative = text[0] == '-';
    std::size_t start = (text[0] == '+' || text[0] == '-') ? 1 : 0;
    if (start == text.size()) return false;
    for (std::size_t i = start; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) return false;
    }
    // Skip redundant leading zeros: GMP would otherwise read "025" in octal.
    while (start + 1 < text.size() && text[start] == '0') ++start;
    out = Integer(text.substr(start));
    if (negative) out = -out;
    return true;
}

Integer pow10(std::size_t n) {
    Integer r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= 10;
    return r;
}

} // namespace

std::optional<Rational> parse_rational(const std::string& text) {
    if (text.empty()) return std::nullopt;

    if (auto slash = text.find('/'); slash != std::string::npos) {
        Integer num, den;
        if (!parse_integer(text.substr(0, slash), num)) return std::nullopt;
        if (!parse_integer(text.substr(slash + 1), den)) return std::nullopt;
        if (den == 0) return std::nullopt;
        return Rational(num) / Rational(den);
    }

    // Decimal form: [sign] digits [. digits] [e|E [sign] digits]
    std::string mantissa = text;
    long exponent10 = 0;
    if (auto epos = text.find_first_of("eE"); epos != std::string::npos) {
        const std::string exp_part = text.substr(epos + 1);
        Integer exp_int;
        if (!parse_integer(exp_part, exp_int)) return std::nullopt;
        if (exp_int > 4096 || exp_int < -4096) return std::nullopt;
        exponent10 = static_cast<long>(exp_int);
        mantissa = text.substr(0, epos);
    }

    std::string digits = mantissa;
    std::size_t frac_len = 0;
    if (auto dot = mantissa.find('.'); dot != std::string::npos) {
        frac_len = mantissa.size() - dot - 1;
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        if (digits.empty() || digits == "+" || digits == "-") return std::nullopt;
    }
    Integer num;
    if (!parse_integer(digits, num)) return std::nullopt;

    Rational value(num);
    if (frac_len > 0) value /= Rational(pow10(frac_len));
    if (exponent10 > 0) value *= Rational(pow10(static_cast<std::size_t>(exponent10)));
    if (exponent10 < 0) value /= Rational(pow10(static_cast<std::size_t>(-exponent10)));
    return value;
}

std::string to_string(const Rational& value) {
    const Integer num = boost::multiprecision::numerator(value);
    const Integer den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

double to_double(const Rational& value) {
    return value.convert_to<double>();
}

} // namespace fluxcharge
