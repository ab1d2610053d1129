#include "sweepout/rational.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sweepout {

namespace {

BigInt parse_integer(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty integer in rational literal");
  std::size_t i = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    i = 1;
  }
  if (i == text.size()) throw std::invalid_argument("malformed integer: " + std::string(text));
  BigInt value = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') throw std::invalid_argument("malformed integer: " + std::string(text));
    value = value * 10 + (c - '0');
  }
  return negative ? BigInt(-value) : value;
}

BigInt pow10(int k) {
  BigInt r = 1;
  for (int i = 0; i < k; ++i) r *= 10;
  return r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    BigInt p = parse_integer(text.substr(0, slash));
    BigInt q = parse_integer(text.substr(slash + 1));
    if (q == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    return Rational(p, q);
  }
  int exponent = 0;
  auto e = text.find_first_of("eE");
  std::string_view mantissa = text;
  if (e != std::string_view::npos) {
    exponent = static_cast<int>(parse_integer(text.substr(e + 1)).convert_to<long long>());
    mantissa = text.substr(0, e);
  }
  auto dot = mantissa.find('.');
  Rational value;
  if (dot == std::string_view::npos) {
    value = Rational(parse_integer(mantissa));
  } else {
    std::string digits(mantissa.substr(0, dot));
    std::string frac(mantissa.substr(dot + 1));
    if (digits.empty() || digits == "-" || digits == "+") digits += "0";
    bool negative = !digits.empty() && digits[0] == '-';
    BigInt whole = parse_integer(digits);
    BigInt f = frac.empty() ? BigInt(0) : parse_integer(frac);
    Rational magnitude = Rational(negative ? BigInt(-whole) : whole) +
                         Rational(f, pow10(static_cast<int>(frac.size())));
    value = negative ? Rational(-magnitude) : magnitude;
  }
  if (exponent > 0) value *= Rational(pow10(exponent));
  if (exponent < 0) value /= Rational(pow10(-exponent));
  return value;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("non-finite value cannot be made exact");
  if (value == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(value, &exp);
  // mant * 2^53 is an exact integer
  long long scaled = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r(scaled);
  BigInt two_pow = 1;
  two_pow <<= std::abs(exp);
  if (exp > 0) r *= Rational(two_pow);
  if (exp < 0) r /= Rational(two_pow);
  return r;
}

std::string format_rational(const Rational& value) {
  auto num = boost::multiprecision::numerator(value);
  auto den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

std::string format_real(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }

int sign(const Rational& value) { return value > 0 ? 1 : (value < 0 ? -1 : 0); }

}  // namespace sweepout
