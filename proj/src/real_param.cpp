#include "phyllo/real_param.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "phyllo/errors.hpp"

namespace phyllo {

namespace {

// Extracts square factors so the radicand becomes squarefree: d = s^2 * d'.
// Returns d', multiplies *scale by s.
long long squarefree_part(long long d, BigInt* scale) {
  long long s = 1;
  for (long long p = 2; p * p <= d && p <= 1000000; ++p) {
    while (d % (p * p) == 0) {
      d /= p * p;
      s *= p;
    }
  }
  // leftover could itself be a perfect square of a large prime
  long long r = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(d))));
  for (long long c = std::max<long long>(1, r - 1); c <= r + 1; ++c) {
    if (c * c == d) {
      d = 1;
      s *= c;
      break;
    }
  }
  *scale = *scale * BigInt(s);
  return d;
}

// floor(b * sqrt(d)) for squarefree d >= 2, b != 0 (so the value is irrational).
BigInt floor_b_sqrt_d(const BigInt& b, long long d) {
  BigInt root = BigInt::isqrt(b * b * BigInt(d));
  if (b.sign() >= 0) return root;
  return -root - BigInt(1);
}

}  // namespace

RealParam RealParam::rational(BigInt p, BigInt q) {
  if (q.is_zero()) throw ParseError("RealParam: zero denominator");
  if (q.sign() < 0) {
    p = -p;
    q = -q;
  }
  BigInt g = BigInt::gcd(p, q);
  if (!g.is_zero() && g != BigInt(1)) {
    p = p / g;
    q = q / g;
  }
  return RealParam(Rational{std::move(p), std::move(q)});
}

RealParam RealParam::surd(BigInt a, BigInt b, long long d, BigInt c) {
  if (c.is_zero()) throw ParseError("RealParam: zero denominator");
  if (d < 0) throw ParseError("RealParam: negative radicand");
  if (d == 0 || b.is_zero()) return rational(std::move(a), std::move(c));
  BigInt scale(1);
  d = squarefree_part(d, &scale);
  b *= scale;
  if (d == 1) return rational(a + b, c);
  if (c.sign() < 0) {
    a = -a;
    b = -b;
    c = -c;
  }
  BigInt g = BigInt::gcd(BigInt::gcd(a, b), c);
  if (!g.is_zero() && g != BigInt(1)) {
    a = a / g;
    b = b / g;
    c = c / g;
  }
  return RealParam(QuadraticSurd{std::move(a), std::move(b), std::move(c), d});
}

RealParam RealParam::floating(double x, double eps) {
  if (!(eps > 0)) throw ParseError("RealParam: Float tolerance must be positive");
  if (!std::isfinite(x)) throw ParseError("RealParam: non-finite value");
  return RealParam(FloatVal{x, eps});
}

RealParam RealParam::golden() { return surd(BigInt(1), BigInt(1), 5, BigInt(2)); }

bool RealParam::is_integer() const {
  if (const auto* r = as_rational()) return r->den == BigInt(1);
  return false;
}

double RealParam::to_double() const {
  if (const auto* r = as_rational()) {
    // scaled division keeps full precision for small fractions
    BigInt q, rem;
    BigInt::divmod_floor(r->num, r->den, q, rem);
    double head = q.to_double();
    BigInt scaled = (rem << 64) / r->den;
    return head + std::ldexp(scaled.to_double(), -64);
  }
  if (const auto* s = as_surd()) {
    BigInt f = floor_big();
    // value - floor in [0,1): numerator (a - f*c) + b*sqrt(d), all >= 0 total
    BigInt num_int = s->a - f * s->c;
    BigInt t = (num_int << 64);
    BigInt root = BigInt::isqrt(((s->b * s->b * BigInt(s->d)) << 128));
    t += s->b.sign() >= 0 ? root : -root - BigInt(1);
    double fracpart = t.to_double() / std::ldexp(s->c.to_double(), 64);
    return f.to_double() + fracpart;
  }
  return as_float()->x;
}

double RealParam::tolerance() const {
  if (const auto* f = as_float()) return f->eps;
  return 0.0;
}

BigInt RealParam::floor_big() const {
  if (const auto* r = as_rational()) {
    BigInt q, rem;
    BigInt::divmod_floor(r->num, r->den, q, rem);
    return q;
  }
  if (const auto* s = as_surd()) {
    BigInt q, rem;
    BigInt::divmod_floor(s->a + floor_b_sqrt_d(s->b, s->d), s->c, q, rem);
    return q;
  }
  return BigInt(static_cast<long long>(std::floor(as_float()->x)));
}

long long RealParam::floor() const {
  BigInt f = floor_big();
  if (!f.fits_int64()) throw Error("RealParam::floor: out of int64 range");
  return f.to_int64();
}

double RealParam::frac() const { return frac_scaled(1, 1); }

double RealParam::frac_scaled(long long n, long long m) const {
  if (n < 0 || m < 1) throw Error("RealParam::frac_scaled: bad arguments");
  if (n == 0) return 0.0;
  if (const auto* r = as_rational()) {
    BigInt den = r->den * BigInt(m);
    BigInt q, rem;
    BigInt::divmod_floor(BigInt(n) * r->num, den, q, rem);
    if (rem.is_zero()) return 0.0;
    BigInt scaled = (rem << 64) / den;
    return std::ldexp(scaled.to_double(), -64);
  }
  if (const auto* s = as_surd()) {
    BigInt a = BigInt(n) * s->a;
    BigInt b = BigInt(n) * s->b;
    BigInt c = s->c * BigInt(m);
    BigInt f, rem;
    BigInt::divmod_floor(a + floor_b_sqrt_d(b, s->d), c, f, rem);
    BigInt t = ((a - f * c) << 64);
    BigInt root = BigInt::isqrt(((b * b * BigInt(s->d)) << 128));
    t += b.sign() >= 0 ? root : -root - BigInt(1);
    double v = t.to_double() / std::ldexp(c.to_double(), 64);
    if (v >= 1.0) v = std::nextafter(1.0, 0.0);
    return v < 0 ? 0.0 : v;
  }
  // compensated two-product: n*x = hi + lo exactly (up to the final fma round)
  double x = as_float()->x / static_cast<double>(m);
  double hi = static_cast<double>(n) * x;
  double lo = std::fma(static_cast<double>(n), x, -hi);
  double f = hi - std::floor(hi) + lo;
  f -= std::floor(f);
  if (f >= 1.0) f = 0.0;
  return f;
}

std::string RealParam::to_string() const {
  if (const auto* r = as_rational()) {
    if (r->den == BigInt(1)) return r->num.to_string();
    return r->num.to_string() + "/" + r->den.to_string();
  }
  if (const auto* s = as_surd()) {
    std::string out = "(" + s->a.to_string() + (s->b.sign() < 0 ? "-" : "+") +
                      s->b.abs().to_string() + "*sqrt(" + std::to_string(s->d) + "))/" +
                      s->c.to_string();
    return out;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", as_float()->x);
  return buf;
}

// ---------------------------------------------------------------------------
// θ-expression parser
// ---------------------------------------------------------------------------

namespace {

// Value in Q[sqrt(d)] (flt == false) or a plain double (flt == true).
struct PVal {
  bool flt = false;
  double x = 0.0;
  BigInt a, b, c{1};
  long long d = 0;  // 0 means rational

  static PVal from_int(BigInt v) {
    PVal p;
    p.a = std::move(v);
    return p;
  }
  static PVal from_double(double v) {
    PVal p;
    p.flt = true;
    p.x = v;
    return p;
  }
  [[nodiscard]] double value() const {
    if (flt) return x;
    return (a.to_double() + b.to_double() * std::sqrt(static_cast<double>(d))) /
           c.to_double();
  }
};

void normalize(PVal& v) {
  if (v.flt) return;
  if (v.b.is_zero()) v.d = 0;
  if (v.c.sign() < 0) {
    v.a = -v.a;
    v.b = -v.b;
    v.c = -v.c;
  }
  BigInt g = BigInt::gcd(BigInt::gcd(v.a, v.b), v.c);
  if (!g.is_zero() && g != BigInt(1)) {
    v.a = v.a / g;
    v.b = v.b / g;
    v.c = v.c / g;
  }
}

bool compatible(const PVal& u, const PVal& v) {
  return u.d == 0 || v.d == 0 || u.d == v.d;
}

PVal add(PVal u, PVal v, int sign) {
  if (u.flt || v.flt) return PVal::from_double(u.value() + sign * v.value());
  if (!compatible(u, v)) throw ParseError("theta expression: mixed radicals");
  PVal r;
  r.d = u.d != 0 ? u.d : v.d;
  r.a = u.a * v.c + BigInt(sign) * v.a * u.c;
  r.b = u.b * v.c + BigInt(sign) * v.b * u.c;
  r.c = u.c * v.c;
  normalize(r);
  return r;
}

PVal mul(PVal u, PVal v) {
  if (u.flt || v.flt) return PVal::from_double(u.value() * v.value());
  if (!compatible(u, v)) throw ParseError("theta expression: mixed radicals");
  PVal r;
  r.d = u.d != 0 ? u.d : v.d;
  long long d = r.d;
  r.a = u.a * v.a + (u.d != 0 && v.d != 0 ? u.b * v.b * BigInt(d) : BigInt(0));
  r.b = u.a * v.b + u.b * v.a;
  r.c = u.c * v.c;
  normalize(r);
  return r;
}

PVal div(PVal u, PVal v) {
  if (u.flt || v.flt) {
    double dv = v.value();
    if (dv == 0) throw ParseError("theta expression: division by zero");
    return PVal::from_double(u.value() / dv);
  }
  if (!compatible(u, v)) throw ParseError("theta expression: mixed radicals");
  // invert v: conjugate trick for surds
  PVal inv;
  if (v.d == 0 || v.b.is_zero()) {
    if (v.a.is_zero()) throw ParseError("theta expression: division by zero");
    inv.a = v.c;
    inv.c = v.a;
    inv.d = 0;
  } else {
    BigInt denom = v.a * v.a - v.b * v.b * BigInt(v.d);
    if (denom.is_zero()) throw ParseError("theta expression: division by zero");
    inv.a = v.c * v.a;
    inv.b = -(v.c * v.b);
    inv.c = denom;
    inv.d = v.d;
  }
  normalize(inv);
  return mul(std::move(u), std::move(inv));
}

struct Parser {
  std::string_view s;
  size_t pos = 0;
  double float_eps;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) throw ParseError(std::string("theta expression: expected '") + c + "'");
  }

  PVal parse_expr() {
    PVal v = parse_term();
    while (true) {
      skip_ws();
      if (eat('+'))
        v = add(std::move(v), parse_term(), +1);
      else if (eat('-'))
        v = add(std::move(v), parse_term(), -1);
      else
        return v;
    }
  }

  PVal parse_term() {
    PVal v = parse_unary();
    while (true) {
      skip_ws();
      if (eat('*'))
        v = mul(std::move(v), parse_unary());
      else if (eat('/'))
        v = div(std::move(v), parse_unary());
      else
        return v;
    }
  }

  PVal parse_unary() {
    skip_ws();
    if (eat('-')) return add(PVal::from_int(BigInt(0)), parse_unary(), -1);
    if (eat('+')) return parse_unary();
    return parse_primary();
  }

  PVal parse_primary() {
    skip_ws();
    if (pos >= s.size()) throw ParseError("theta expression: unexpected end");
    if (eat('(')) {
      PVal v = parse_expr();
      expect(')');
      return v;
    }
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    throw ParseError(std::string("theta expression: unexpected character '") + c + "'");
  }

  PVal parse_number() {
    size_t start = pos;
    bool is_float = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos < s.size() && s[pos] == '.') {
      is_float = true;
      ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E') && pos + 1 < s.size() &&
        (std::isdigit(static_cast<unsigned char>(s[pos + 1])) || s[pos + 1] == '-' ||
         s[pos + 1] == '+')) {
      is_float = true;
      ++pos;
      if (s[pos] == '-' || s[pos] == '+') ++pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    std::string tok(s.substr(start, pos - start));
    if (tok.empty() || tok == ".") throw ParseError("theta expression: bad number");
    if (is_float) return PVal::from_double(std::strtod(tok.c_str(), nullptr));
    return PVal::from_int(BigInt::from_string(tok));
  }

  PVal parse_ident() {
    size_t start = pos;
    while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    std::string id(s.substr(start, pos - start));
    if (id == "golden" || id == "phi") {
      PVal v;
      v.a = BigInt(1);
      v.b = BigInt(1);
      v.c = BigInt(2);
      v.d = 5;
      return v;
    }
    if (id == "sqrt") {
      expect('(');
      PVal arg = parse_expr();
      expect(')');
      if (arg.flt) {
        if (arg.x < 0) throw ParseError("theta expression: sqrt of negative");
        return PVal::from_double(std::sqrt(arg.x));
      }
      if (arg.d != 0 && !arg.b.is_zero())
        return PVal::from_double(std::sqrt(arg.value()));
      // sqrt(p/q) = sqrt(p*q)/q
      if (arg.a.sign() < 0) throw ParseError("theta expression: sqrt of negative");
      BigInt pq = arg.a * arg.c;
      if (!pq.fits_int64()) return PVal::from_double(std::sqrt(arg.value()));
      PVal v;
      v.b = BigInt(1);
      v.c = arg.c;
      v.d = pq.to_int64();
      if (v.d == 0) return PVal::from_int(BigInt(0));
      // perfect squares collapse to rationals
      BigInt r = BigInt::isqrt(BigInt(v.d));
      if (r * r == BigInt(v.d)) {
        PVal q;
        q.a = r;
        q.c = arg.c;
        normalize(q);
        return q;
      }
      return v;
    }
    if (id == "exp") {
      expect('(');
      PVal arg = parse_expr();
      expect(')');
      return PVal::from_double(std::exp(arg.value()));
    }
    if (id == "pi") return PVal::from_double(3.14159265358979323846);
    throw ParseError("theta expression: unknown identifier '" + id + "'");
  }
};

}  // namespace

RealParam RealParam::parse(std::string_view expr, double float_eps) {
  Parser p{expr, 0, float_eps};
  PVal v = p.parse_expr();
  p.skip_ws();
  if (p.pos != expr.size()) throw ParseError("theta expression: trailing input");
  if (v.flt) return floating(v.x, float_eps);
  if (v.d == 0 || v.b.is_zero()) return rational(std::move(v.a), std::move(v.c));
  return surd(std::move(v.a), std::move(v.b), v.d, std::move(v.c));
}

}  // namespace phyllo
