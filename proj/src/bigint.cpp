#include "phyllo/bigint.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace phyllo {

BigInt::BigInt(long long v) {
  if (v == 0) return;
  sign_ = v < 0 ? -1 : 1;
  // avoid UB on LLONG_MIN
  unsigned long long u = v < 0 ? ~static_cast<unsigned long long>(v) + 1ull
                               : static_cast<unsigned long long>(v);
  mag_.push_back(static_cast<uint32_t>(u & 0xffffffffu));
  if (u >> 32) mag_.push_back(static_cast<uint32_t>(u >> 32));
}

BigInt::BigInt(unsigned long long u) {
  if (u == 0) return;
  sign_ = 1;
  mag_.push_back(static_cast<uint32_t>(u & 0xffffffffu));
  if (u >> 32) mag_.push_back(static_cast<uint32_t>(u >> 32));
}

BigInt BigInt::from_string(std::string_view s) {
  BigInt out;
  bool neg = false;
  size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    neg = s[i] == '-';
    ++i;
  }
  if (i == s.size()) throw std::invalid_argument("BigInt: empty string");
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("BigInt: bad digit");
    out *= BigInt(10);
    out += BigInt(s[i] - '0');
  }
  if (neg) out = -out;
  return out;
}

void BigInt::trim() {
  while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
  if (mag_.empty()) sign_ = 0;
}

int BigInt::cmp_mag(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  return 0;
}

void BigInt::add_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  uint64_t carry = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    uint64_t s = carry + a[i] + (i < b.size() ? b[i] : 0u);
    a[i] = static_cast<uint32_t>(s);
    carry = s >> 32;
  }
  if (carry) a.push_back(static_cast<uint32_t>(carry));
}

void BigInt::sub_mag(std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
  int64_t borrow = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    int64_t s = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0u);
    borrow = s < 0;
    if (s < 0) s += (1ll << 32);
    a[i] = static_cast<uint32_t>(s);
  }
  assert(borrow == 0);
}

BigInt BigInt::abs() const {
  BigInt r = *this;
  if (r.sign_ < 0) r.sign_ = 1;
  return r;
}

BigInt BigInt::operator-() const {
  BigInt r = *this;
  r.sign_ = -r.sign_;
  return r;
}

BigInt& BigInt::operator+=(const BigInt& o) {
  if (o.sign_ == 0) return *this;
  if (sign_ == 0) return *this = o;
  if (sign_ == o.sign_) {
    add_mag(mag_, o.mag_);
  } else {
    int c = cmp_mag(mag_, o.mag_);
    if (c == 0) {
      mag_.clear();
      sign_ = 0;
    } else if (c > 0) {
      sub_mag(mag_, o.mag_);
      trim();
    } else {
      std::vector<uint32_t> tmp = o.mag_;
      sub_mag(tmp, mag_);
      mag_ = std::move(tmp);
      sign_ = o.sign_;
      trim();
    }
  }
  return *this;
}

BigInt& BigInt::operator-=(const BigInt& o) { return *this += -o; }

BigInt& BigInt::operator*=(const BigInt& o) {
  if (sign_ == 0 || o.sign_ == 0) {
    mag_.clear();
    sign_ = 0;
    return *this;
  }
  std::vector<uint32_t> out(mag_.size() + o.mag_.size(), 0);
  for (size_t i = 0; i < mag_.size(); ++i) {
    uint64_t carry = 0;
    for (size_t j = 0; j < o.mag_.size(); ++j) {
      uint64_t cur = out[i + j] + carry +
                     static_cast<uint64_t>(mag_[i]) * o.mag_[j];
      out[i + j] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
    }
    size_t k = i + o.mag_.size();
    while (carry) {
      uint64_t cur = out[k] + carry;
      out[k] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      ++k;
    }
  }
  mag_ = std::move(out);
  sign_ *= o.sign_;
  trim();
  return *this;
}

BigInt& BigInt::operator<<=(unsigned bits) {
  if (sign_ == 0 || bits == 0) return *this;
  unsigned limbs = bits / 32, rem = bits % 32;
  if (rem) {
    uint32_t carry = 0;
    for (auto& limb : mag_) {
      uint64_t v = (static_cast<uint64_t>(limb) << rem) | carry;
      limb = static_cast<uint32_t>(v);
      carry = static_cast<uint32_t>(v >> 32);
    }
    if (carry) mag_.push_back(carry);
  }
  mag_.insert(mag_.begin(), limbs, 0u);
  return *this;
}

BigInt& BigInt::operator>>=(unsigned bits) {
  if (sign_ == 0) return *this;
  unsigned limbs = bits / 32, rem = bits % 32;
  if (limbs >= mag_.size()) {
    mag_.clear();
    sign_ = 0;
    return *this;
  }
  mag_.erase(mag_.begin(), mag_.begin() + limbs);
  if (rem) {
    for (size_t i = 0; i < mag_.size(); ++i) {
      uint64_t hi = (i + 1 < mag_.size()) ? mag_[i + 1] : 0u;
      mag_[i] = static_cast<uint32_t>((mag_[i] >> rem) | (hi << (32 - rem)));
    }
  }
  trim();
  return *this;
}

std::strong_ordering BigInt::operator<=>(const BigInt& o) const {
  if (sign_ != o.sign_) return sign_ <=> o.sign_;
  int c = cmp_mag(mag_, o.mag_) * sign_;
  return c <=> 0;
}

void BigInt::divmod_trunc(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  if (b.sign_ == 0) throw std::domain_error("BigInt: division by zero");
  // binary long division on magnitudes
  BigInt rem, quot;
  size_t n = a.bit_length();
  if (n > 0) {
    quot.mag_.assign((n + 31) / 32, 0u);
    for (size_t i = n; i-- > 0;) {
      rem <<= 1;
      if (a.mag_[i / 32] >> (i % 32) & 1u) {
        if (rem.mag_.empty()) {
          rem.mag_.push_back(1u);
          rem.sign_ = 1;
        } else {
          rem.mag_[0] |= 1u;
        }
      }
      if (cmp_mag(rem.mag_, b.mag_) >= 0 && !rem.mag_.empty()) {
        sub_mag(rem.mag_, b.mag_);
        rem.trim();
        quot.mag_[i / 32] |= 1u << (i % 32);
      } else if (rem.mag_.empty()) {
        rem.sign_ = 0;
      }
    }
    quot.sign_ = 1;
    quot.trim();
  }
  quot.sign_ = quot.mag_.empty() ? 0 : a.sign_ * b.sign_;
  rem.sign_ = rem.mag_.empty() ? 0 : a.sign_;
  q = std::move(quot);
  r = std::move(rem);
}

void BigInt::divmod_floor(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
  divmod_trunc(a, b, q, r);
  if (!r.is_zero() && (r.sign_ != b.sign_)) {
    q -= BigInt(1);
    r += b;
  }
}

BigInt operator/(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod_trunc(a, b, q, r);
  return q;
}

BigInt operator%(const BigInt& a, const BigInt& b) {
  BigInt q, r;
  BigInt::divmod_trunc(a, b, q, r);
  return r;
}

BigInt BigInt::gcd(BigInt a, BigInt b) {
  a.sign_ = a.mag_.empty() ? 0 : 1;
  b.sign_ = b.mag_.empty() ? 0 : 1;
  while (!b.is_zero()) {
    BigInt q, r;
    divmod_trunc(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

BigInt BigInt::isqrt(const BigInt& n) {
  if (n.sign_ < 0) throw std::domain_error("BigInt::isqrt: negative input");
  if (n.is_zero()) return BigInt();
  size_t bits = n.bit_length();
  // initial overestimate: 2^ceil(bits/2)
  BigInt x(1);
  x <<= static_cast<unsigned>((bits + 1) / 2);
  while (true) {
    BigInt y = (x + n / x) >> 1;
    if (y >= x) break;
    x = std::move(y);
  }
  // x = floor(sqrt(n)) now; Newton from above lands exactly
  return x;
}

size_t BigInt::bit_length() const {
  if (mag_.empty()) return 0;
  uint32_t top = mag_.back();
  size_t b = 0;
  while (top) {
    ++b;
    top >>= 1;
  }
  return (mag_.size() - 1) * 32 + b;
}

bool BigInt::fits_int64() const {
  if (mag_.size() > 2) return false;
  if (mag_.size() < 2) return true;
  uint64_t u = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
  return sign_ > 0 ? u <= 0x7fffffffffffffffull : u <= 0x8000000000000000ull;
}

long long BigInt::to_int64() const {
  assert(fits_int64());
  uint64_t u = 0;
  if (!mag_.empty()) u = mag_[0];
  if (mag_.size() > 1) u |= static_cast<uint64_t>(mag_[1]) << 32;
  return sign_ < 0 ? -static_cast<long long>(u) : static_cast<long long>(u);
}

double BigInt::to_double() const {
  if (sign_ == 0) return 0.0;
  size_t bits = bit_length();
  double r;
  if (bits <= 64) {
    uint64_t u = mag_[0];
    if (mag_.size() > 1) u |= static_cast<uint64_t>(mag_[1]) << 32;
    r = static_cast<double>(u);
  } else {
    BigInt top = *this;
    top.sign_ = 1;
    top >>= static_cast<unsigned>(bits - 64);
    uint64_t u = top.mag_[0] | (static_cast<uint64_t>(top.mag_[1]) << 32);
    r = std::ldexp(static_cast<double>(u), static_cast<int>(bits - 64));
  }
  return sign_ < 0 ? -r : r;
}

std::string BigInt::to_string() const {
  if (sign_ == 0) return "0";
  BigInt v = abs();
  const BigInt billion(1000000000);
  std::string out;
  while (!v.is_zero()) {
    BigInt q, r;
    divmod_trunc(v, billion, q, r);
    uint32_t chunk = r.mag_.empty() ? 0u : r.mag_[0];
    for (int i = 0; i < 9; ++i) {
      out.push_back(static_cast<char>('0' + chunk % 10));
      chunk /= 10;
    }
    v = std::move(q);
  }
  while (out.size() > 1 && out.back() == '0') out.pop_back();
  if (sign_ < 0) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace phyllo
