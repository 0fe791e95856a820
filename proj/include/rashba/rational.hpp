// rational.hpp — exact rational scalar used on the exact-arithmetic paths

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace rashba {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Every finite double is a dyadic rational; this conversion is lossless.
Rational rational_from_double(double x);

double to_double(const Rational& r);

// Accepts "3/10", "-7", "0.25", "2.5e-3". Fraction and decimal forms parse
// exactly (decimals become over-a-power-of-ten rationals).
std::optional<Rational> parse_rational(std::string_view text);

// "num/den" (or just "num" when den == 1); round-trips through parse_rational.
std::string to_string(const Rational& r);

}  // namespace rashba
