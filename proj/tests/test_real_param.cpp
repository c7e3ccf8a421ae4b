#include "phyllo/real_param.hpp"

#include <cmath>

#include "doctest.h"
#include "phyllo/errors.hpp"

using phyllo::BigInt;
using phyllo::RealParam;

TEST_CASE("parser accepts the documented grammar") {
  CHECK(RealParam::parse("golden").is_surd());
  CHECK(RealParam::parse("golden").to_double() == doctest::Approx(1.6180339887498949));
  CHECK(RealParam::parse("1/2").is_rational());
  CHECK(RealParam::parse("1/2").to_double() == doctest::Approx(0.5));
  CHECK(RealParam::parse("sqrt(2)").to_double() == doctest::Approx(std::sqrt(2.0)));
  CHECK(RealParam::parse("(1765-sqrt(5))/2858").to_double() ==
        doctest::Approx((1765.0 - std::sqrt(5.0)) / 2858.0));
  CHECK(RealParam::parse("(1+1*sqrt(5))/2").to_double() ==
        doctest::Approx(1.6180339887498949));
  CHECK(RealParam::parse("exp(-1)").is_float());
  CHECK(RealParam::parse("exp(-1)").to_double() == doctest::Approx(std::exp(-1.0)));
  CHECK(RealParam::parse("0.381966").is_float());
  CHECK(RealParam::parse("-3/7").to_double() == doctest::Approx(-3.0 / 7.0));
  CHECK_THROWS_AS(RealParam::parse("sqrt(2)+sqrt(3)"), phyllo::ParseError);
  CHECK_THROWS_AS(RealParam::parse("1/0"), phyllo::ParseError);
  CHECK_THROWS_AS(RealParam::parse("wibble"), phyllo::ParseError);
}

TEST_CASE("surd normalization") {
  // sqrt(8) = 2 sqrt(2)
  auto v = RealParam::parse("sqrt(8)");
  REQUIRE(v.is_surd());
  CHECK(v.as_surd()->d == 2);
  CHECK(v.as_surd()->b == BigInt(2));
  // sqrt(9) collapses to a rational
  CHECK(RealParam::parse("sqrt(9)").is_rational());
  CHECK(RealParam::parse("sqrt(9)").to_double() == doctest::Approx(3.0));
  // negative denominator flips into c > 0
  auto w = RealParam::parse("(1+sqrt(5))/(0-2)");
  REQUIRE(w.is_surd());
  CHECK(w.as_surd()->c.sign() > 0);
  CHECK(w.to_double() == doctest::Approx(-1.6180339887498949));
}

TEST_CASE("floor and frac") {
  CHECK(RealParam::parse("golden").floor() == 1);
  CHECK(RealParam::parse("golden").frac() == doctest::Approx(0.6180339887498949));
  CHECK(RealParam::parse("-3/2").floor() == -2);
  CHECK(RealParam::parse("-3/2").frac() == doctest::Approx(0.5));
  CHECK(RealParam::parse("7").floor() == 7);
  CHECK(RealParam::parse("7").frac() == doctest::Approx(0.0));
  CHECK(RealParam::parse("(0-1-sqrt(5))/2").floor() == -2);
}

TEST_CASE("frac_scaled matches long double reference for exact theta") {
  auto golden = RealParam::golden();
  long double th = (1.0L + std::sqrt(5.0L)) / 2.0L;
  for (long long n : {1ll, 2ll, 10ll, 1234ll, 99999ll, 1000000ll}) {
    long double v = th * static_cast<long double>(n);
    long double f = v - std::floor(v);
    CHECK(golden.frac_scaled(n) ==
          doctest::Approx(static_cast<double>(f)).epsilon(1e-9));
  }
  auto r = RealParam::parse("355/113");
  for (long long n : {1ll, 7ll, 113ll, 100000ll}) {
    long long num = (n * 355ll) % 113ll;
    CHECK(r.frac_scaled(n) == doctest::Approx(static_cast<double>(num) / 113.0));
  }
  // divisor variant: frac(n*theta/m)
  CHECK(golden.frac_scaled(1, 2) == doctest::Approx(0.80901699437494745));
}

TEST_CASE("float frac_scaled is compensated") {
  auto f = RealParam::floating(std::exp(-1.0));
  long double x = std::exp(-1.0L);
  // the long double reference diverges from naive double product at large n
  for (long long n : {1000000ll, 10000000ll}) {
    long double v = static_cast<long double>(static_cast<double>(std::exp(-1.0))) * n;
    long double fr = v - std::floor(v);
    CHECK(f.frac_scaled(n) == doctest::Approx(static_cast<double>(fr)).epsilon(1e-8));
  }
  (void)x;
}
