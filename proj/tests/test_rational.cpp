#include "doctest.h"
#include "sweepout/rational.hpp"

using namespace sweepout;

TEST_CASE("rational literals parse and print losslessly") {
  CHECK(parse_rational("1/2") == Rational(1, 2));
  CHECK(parse_rational("-3/6") == Rational(-1, 2));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(format_rational(Rational(3, 4)) == "3/4");
  CHECK(format_rational(Rational(-2)) == "-2");
  for (const char* text : {"5/7", "-11/3", "0", "12"}) CHECK(format_rational(parse_rational(text)) == text);
}

TEST_CASE("malformed literals are rejected") {
  CHECK_THROWS(parse_rational(""));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("a/2"));
}

TEST_CASE("doubles convert exactly and reals print with 12 digits") {
  CHECK(rational_from_double(0.375) == Rational(3, 8));
  CHECK(rational_from_double(-2.0) == Rational(-2));
  CHECK(to_double(rational_from_double(0.1)) == 0.1);
  CHECK(format_real(1.0 / 3.0) == "0.333333333333");
}
