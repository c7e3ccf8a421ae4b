#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace phyllo {

/// Arbitrary-precision signed integer, little-endian base 2^32 magnitude.
/// Sized for continued-fraction states and exact phase reduction, not for
/// cryptographic workloads; all algorithms are the simple quadratic ones.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v);
  BigInt(int v) : BigInt(static_cast<long long>(v)) {}
  BigInt(unsigned long long v);

  static BigInt from_string(std::string_view s);

  [[nodiscard]] int sign() const { return sign_; }
  [[nodiscard]] bool is_zero() const { return sign_ == 0; }
  [[nodiscard]] bool is_odd() const { return sign_ != 0 && (mag_[0] & 1u); }
  [[nodiscard]] bool is_even() const { return !is_odd(); }

  [[nodiscard]] BigInt abs() const;
  BigInt operator-() const;

  BigInt& operator+=(const BigInt& o);
  BigInt& operator-=(const BigInt& o);
  BigInt& operator*=(const BigInt& o);
  BigInt& operator<<=(unsigned bits);
  BigInt& operator>>=(unsigned bits);

  friend BigInt operator+(BigInt a, const BigInt& b) { return a += b; }
  friend BigInt operator-(BigInt a, const BigInt& b) { return a -= b; }
  friend BigInt operator*(BigInt a, const BigInt& b) { return a *= b; }
  friend BigInt operator<<(BigInt a, unsigned bits) { return a <<= bits; }
  friend BigInt operator>>(BigInt a, unsigned bits) { return a >>= bits; }

  /// Truncated division (C semantics): quotient rounds toward zero.
  static void divmod_trunc(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
  /// Floor division: remainder has the sign of the divisor, 0 <= r < |b| for b > 0.
  static void divmod_floor(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

  friend BigInt operator/(const BigInt& a, const BigInt& b);
  friend BigInt operator%(const BigInt& a, const BigInt& b);

  std::strong_ordering operator<=>(const BigInt& o) const;
  bool operator==(const BigInt& o) const = default;

  [[nodiscard]] static BigInt gcd(BigInt a, BigInt b);
  /// Floor of the square root; input must be nonnegative.
  [[nodiscard]] static BigInt isqrt(const BigInt& n);

  [[nodiscard]] size_t bit_length() const;
  [[nodiscard]] bool fits_int64() const;
  [[nodiscard]] long long to_int64() const;  // asserts fits_int64
  [[nodiscard]] double to_double() const;
  [[nodiscard]] std::string to_string() const;

 private:
  int sign_ = 0;                // -1, 0, +1
  std::vector<uint32_t> mag_;   // empty iff sign_ == 0, no leading zero limb

  void trim();
  static int cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  static void add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
  // requires |a| >= |b|
  static void sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b);
};

}  // namespace phyllo
