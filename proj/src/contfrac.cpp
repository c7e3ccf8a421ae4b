#include "phyllo/contfrac.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "phyllo/errors.hpp"

namespace phyllo::contfrac {

namespace {

ContinuedFraction expand_rational(const Rational& r, long long max_terms) {
  ContinuedFraction cf;
  cf.exact = true;
  BigInt p = r.num, q = r.den;
  while (static_cast<long long>(cf.coefficients.size()) < max_terms) {
    cf.tail_values.push_back(RealParam::rational(p, q));
    BigInt a, rem;
    BigInt::divmod_floor(p, q, a, rem);
    if (!a.fits_int64()) throw Error("contfrac: coefficient exceeds int64");
    cf.coefficients.push_back(a.to_int64());
    if (rem.is_zero()) {
      cf.terminated = true;
      return cf;
    }
    p = q;
    q = rem;
  }
  return cf;
}

BigInt floor_surd_state(const BigInt& P, const BigInt& B, long long d, const BigInt& Q) {
  // floor((P + B*sqrt(d))/Q), Q > 0
  BigInt fb = BigInt::isqrt(B * B * BigInt(d));
  if (B.sign() < 0) fb = -fb - BigInt(1);
  BigInt q, rem;
  BigInt::divmod_floor(P + fb, Q, q, rem);
  return q;
}

ContinuedFraction expand_surd(const QuadraticSurd& s, long long max_terms) {
  ContinuedFraction cf;
  cf.exact = true;
  // state x_i = (P + B*sqrt(d))/Q with Q > 0
  BigInt P = s.a, B = s.b, Q = s.c;
  long long d = s.d;
  std::map<std::tuple<std::string, std::string, std::string>, long long> seen;
  while (static_cast<long long>(cf.coefficients.size()) < max_terms) {
    long long idx = static_cast<long long>(cf.coefficients.size());
    if (cf.period_start < 0) {
      auto key = std::make_tuple(P.to_string(), B.to_string(), Q.to_string());
      auto [it, inserted] = seen.emplace(key, idx);
      if (!inserted) {
        cf.period_start = it->second;
        cf.period_length = idx - it->second;
      }
    }
    cf.tail_values.push_back(RealParam::surd(P, B, d, Q));
    BigInt a = floor_surd_state(P, B, d, Q);
    if (!a.fits_int64()) throw Error("contfrac: coefficient exceeds int64");
    cf.coefficients.push_back(a.to_int64());
    // x_{i+1} = 1/(x_i - a) = (Q*u - Q*B*sqrt(d)) / (u^2 - B^2 d), u = P - a*Q
    BigInt u = P - a * Q;
    BigInt newP = Q * u;
    BigInt newB = -(Q * B);
    BigInt newQ = u * u - B * B * BigInt(d);
    if (newQ.is_zero()) throw Error("contfrac: surd degenerated to rational");
    if (newQ.sign() < 0) {
      newP = -newP;
      newB = -newB;
      newQ = -newQ;
    }
    BigInt g = BigInt::gcd(BigInt::gcd(newP, newB), newQ);
    if (g != BigInt(1)) {
      newP = newP / g;
      newB = newB / g;
      newQ = newQ / g;
    }
    P = std::move(newP);
    B = std::move(newB);
    Q = std::move(newQ);
  }
  return cf;
}

ContinuedFraction expand_float(const FloatVal& f, long long max_terms) {
  ContinuedFraction cf;
  double x = f.x;
  double qm2 = 1.0, qm1 = 0.0;  // q_{n-2}, q_{n-1}
  while (static_cast<long long>(cf.coefficients.size()) < max_terms) {
    double a = std::floor(x);
    if (std::abs(a) > 9.0e18) break;
    cf.coefficients.push_back(static_cast<long long>(a));
    double q_new = qm2 + a * qm1;
    qm2 = qm1;
    qm1 = q_new;
    double frac = x - a;
    // forward-stability cut-off: coefficients past this point are noise
    if (frac < f.eps || q_new * q_new * f.eps > 1.0) break;
    x = 1.0 / frac;
  }
  return cf;
}

}  // namespace

ContinuedFraction expand(const RealParam& theta, long long max_terms) {
  if (max_terms < 1) throw Error("contfrac::expand: max_terms must be >= 1");
  if (const auto* r = theta.as_rational()) return expand_rational(*r, max_terms);
  if (const auto* s = theta.as_surd()) return expand_surd(*s, max_terms);
  return expand_float(*theta.as_float(), max_terms);
}

std::vector<Convergent> convergents(const ContinuedFraction& cf, long long n_max) {
  if (n_max >= static_cast<long long>(cf.coefficients.size()))
    throw Error("contfrac::convergents: n_max beyond available coefficients");
  std::vector<Convergent> out;
  out.push_back({BigInt(0), BigInt(1), -2});
  out.push_back({BigInt(1), BigInt(0), -1});
  for (long long n = 0; n <= n_max; ++n) {
    BigInt a(cf.coefficients[static_cast<size_t>(n)]);
    Convergent c;
    c.p = out[static_cast<size_t>(n)].p + a * out[static_cast<size_t>(n + 1)].p;
    c.q = out[static_cast<size_t>(n)].q + a * out[static_cast<size_t>(n + 1)].q;
    c.index = n;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<Convergent> intermediate_convergents(const ContinuedFraction& cf, long long n) {
  if (n < 0 || n >= static_cast<long long>(cf.coefficients.size()))
    throw Error("contfrac::intermediate_convergents: index out of range");
  auto conv = convergents(cf, n);
  long long a_n = cf.coefficients[static_cast<size_t>(n)];
  std::vector<Convergent> out;
  const auto& cm2 = conv[static_cast<size_t>(n)];      // index n-2
  const auto& cm1 = conv[static_cast<size_t>(n + 1)];  // index n-1
  for (long long k = 0; k < a_n; ++k) {
    Convergent c;
    c.p = cm2.p + BigInt(k) * cm1.p;
    c.q = cm2.q + BigInt(k) * cm1.q;
    c.index = n;
    out.push_back(std::move(c));
  }
  return out;
}

Tail tail(const RealParam& theta, long long n) {
  if (n < 0) throw Error("contfrac::tail: n must be >= 0");
  if (n == 0) return Tail{theta, 0};
  ContinuedFraction cf = expand(theta, n + 2);
  if (static_cast<long long>(cf.tail_values.size()) > n)
    return Tail{cf.tail_values[static_cast<size_t>(n)], n};
  if (cf.terminated)
    throw TailUndefined("contfrac::tail: rational expansion terminated before index");
  if (!cf.exact) {
    // Float: evaluate [a_n; a_{n+1}, ...] backward over the available terms
    ContinuedFraction full = expand(theta, n + 48);
    if (static_cast<long long>(full.coefficients.size()) <= n)
      throw TailUndefined("contfrac::tail: expansion exhausted at this tolerance");
    return Tail{RealParam::floating(tail_double(full, n), theta.tolerance()), n};
  }
  throw TailUndefined("contfrac::tail: index beyond expansion");
}

double tail_double(const ContinuedFraction& cf, long long n) {
  if (n < 0 || n >= static_cast<long long>(cf.coefficients.size()))
    throw Error("contfrac::tail_double: index out of range");
  if (static_cast<long long>(cf.tail_values.size()) > n)
    return cf.tail_values[static_cast<size_t>(n)].to_double();
  double v = static_cast<double>(cf.coefficients.back());
  for (size_t i = cf.coefficients.size() - 1; i-- > static_cast<size_t>(n);)
    v = static_cast<double>(cf.coefficients[i]) + 1.0 / v;
  return v;
}

IdentityReport verify_identities(const RealParam& theta, long long n_max) {
  IdentityReport rep;
  rep.n_max = n_max;
  ContinuedFraction cf = expand(theta, n_max + 4);
  long long have = static_cast<long long>(cf.coefficients.size());
  long long top = std::min(n_max, have - 1);
  long long conv_top = std::min(top + 2, have - 1);
  auto conv = convergents(cf, conv_top);
  auto q_at = [&](long long k) { return conv[static_cast<size_t>(k + 2)].q.to_double(); };
  auto p_at = [&](long long k) { return conv[static_cast<size_t>(k + 2)].p.to_double(); };
  double theta_d = theta.to_double();
  auto track = [&](double r) {
    if (std::abs(r) > rep.max_residual) rep.max_residual = std::abs(r);
    ++rep.checks;
  };

  for (long long n = 0; n <= top; ++n) {
    const auto& cn = conv[static_cast<size_t>(n + 2)];
    const auto& cn1 = conv[static_cast<size_t>(n + 1)];
    BigInt det = cn1.p * cn.q - cn.p * cn1.q;
    BigInt expected((n % 2 == 0) ? 1 : -1);
    if (det != expected) {
      rep.determinant_exact = false;
      throw IdentityViolation("contfrac: determinant identity fails", n);
    }
    ++rep.checks;

    double thn = tail_double(cf, n);
    double denom_n = q_at(n - 2) + thn * q_at(n - 1);
    track(theta_d - (p_at(n - 2) + thn * p_at(n - 1)) / denom_n);

    if (n + 1 <= have - 1) {
      double thn1 = tail_double(cf, n + 1);
      track(thn1 / (q_at(n - 1) + thn1 * q_at(n)) - 1.0 / denom_n);
    }

    double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    for (double x : {0.0, static_cast<double>(cf.coefficients[static_cast<size_t>(n)]), thn}) {
      double lhs = theta_d - (p_at(n - 2) + x * p_at(n - 1)) / (q_at(n - 2) + x * q_at(n - 1));
      double rhs = (thn - x) * sgn / ((q_at(n - 2) + x * q_at(n - 1)) * denom_n);
      track(lhs - rhs);
    }

    if (n + 2 <= have - 1 && n + 1 <= conv_top) {
      double thn1 = tail_double(cf, n + 1);
      double thn2 = tail_double(cf, n + 2);
      double a_n1 = static_cast<double>(cf.coefficients[static_cast<size_t>(n + 1)]);
      track(1.0 / denom_n - a_n1 / (q_at(n - 1) + thn1 * q_at(n)) -
            1.0 / (q_at(n) + thn2 * q_at(n + 1)));
    }
  }
  return rep;
}

}  // namespace phyllo::contfrac
