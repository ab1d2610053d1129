#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace sweepout {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Accepts "p/q", "p", and plain decimals such as "0.25" or "-1e-3".
Rational parse_rational(std::string_view text);

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double value);

// "p/q" with q > 1, otherwise "p".
std::string format_rational(const Rational& value);

double to_double(const Rational& value);

// Decimal with 12 significant digits, the report format for reals.
std::string format_real(double value);

Rational abs(const Rational& value);

int sign(const Rational& value);

}  // namespace sweepout
