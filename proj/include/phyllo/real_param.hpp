#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "phyllo/bigint.hpp"

namespace phyllo {

/// Exact rational p/q, stored in lowest terms with q > 0.
struct Rational {
  BigInt num;
  BigInt den;
};

/// (a + b*sqrt(d)) / c with d squarefree >= 2, c > 0, b != 0, gcd(a,b,c) = 1.
struct QuadraticSurd {
  BigInt a;
  BigInt b;
  BigInt c;
  long long d = 0;
};

/// Double value with an explicit tolerance; continued-fraction expansions of
/// Float parameters are truncated once coefficients become meaningless at eps.
struct FloatVal {
  double x = 0.0;
  double eps = 1e-15;
};

/// The divergence parameter θ: exact rational, exact quadratic surd, or float.
class RealParam {
 public:
  RealParam() : v_(Rational{BigInt(0), BigInt(1)}) {}

  static RealParam rational(BigInt p, BigInt q);
  static RealParam surd(BigInt a, BigInt b, long long d, BigInt c);
  static RealParam floating(double x, double eps = 1e-15);
  static RealParam golden();  // (1+sqrt(5))/2

  /// Parses a θ-expression: `golden`, `p/q`, decimal literals, `sqrt(d)`,
  /// `(a+b*sqrt(d))/c`, `exp(-1)`, and arithmetic combinations thereof.
  static RealParam parse(std::string_view expr, double float_eps = 1e-15);

  [[nodiscard]] bool is_exact() const { return !std::holds_alternative<FloatVal>(v_); }
  [[nodiscard]] bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  [[nodiscard]] bool is_surd() const { return std::holds_alternative<QuadraticSurd>(v_); }
  [[nodiscard]] bool is_float() const { return std::holds_alternative<FloatVal>(v_); }
  [[nodiscard]] bool is_integer() const;

  [[nodiscard]] const Rational* as_rational() const { return std::get_if<Rational>(&v_); }
  [[nodiscard]] const QuadraticSurd* as_surd() const { return std::get_if<QuadraticSurd>(&v_); }
  [[nodiscard]] const FloatVal* as_float() const { return std::get_if<FloatVal>(&v_); }

  [[nodiscard]] double to_double() const;
  [[nodiscard]] double tolerance() const;  // eps for Float, 0 for exact

  [[nodiscard]] BigInt floor_big() const;
  [[nodiscard]] long long floor() const;
  /// {θ} in [0,1), computed without cancellation for exact variants.
  [[nodiscard]] double frac() const;

  /// frac(n·θ/m) in [0,1) for integers n >= 0, m >= 1; exact arithmetic for
  /// exact variants, compensated two-product for Float.
  [[nodiscard]] double frac_scaled(long long n, long long m = 1) const;

  [[nodiscard]] std::string to_string() const;

 private:
  std::variant<Rational, QuadraticSurd, FloatVal> v_;
  explicit RealParam(std::variant<Rational, QuadraticSurd, FloatVal> v) : v_(std::move(v)) {}
};

}  // namespace phyllo
