#include "phyllo/linearize.hpp"

#include <algorithm>
#include <cmath>

#include "phyllo/errors.hpp"
#include "phyllo/matching.hpp"
#include "phyllo/phyllo_set.hpp"

namespace phyllo::linearize {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Expansion {
  contfrac::ContinuedFraction cf;
  std::vector<contfrac::Convergent> conv;  // indices -2 .. top
  [[nodiscard]] long long top() const {
    return static_cast<long long>(cf.coefficients.size()) - 1;
  }
  [[nodiscard]] const BigInt& q(long long k) const {
    return conv[static_cast<size_t>(k + 2)].q;
  }
  [[nodiscard]] double qd(long long k) const { return q(k).to_double(); }
};

Expansion expand_for(const RealParam& theta, long long need_terms) {
  Expansion e;
  e.cf = contfrac::expand(theta, std::max<long long>(need_terms, 4));
  e.conv = contfrac::convergents(e.cf, e.top());
  return e;
}

long long select_j_in(const Expansion& e, long long n);

// grows the expansion until q_j^2 > n (plus margin so tail_double keeps full
// double accuracy) or the expansion is exhausted
Expansion expand_past_sqrt(const RealParam& theta, long long n) {
  long long terms = 24;
  while (true) {
    Expansion e = expand_for(theta, terms);
    bool exhausted = e.top() + 1 < terms;  // expansion stopped early
    if (e.q(e.top()) * e.q(e.top()) > BigInt(n)) {
      if (e.cf.exact || exhausted) return e;
      // float input: extend so truncated tails are accurate to ~1e-15
      long long covered = select_j_in(e, n);
      return expand_for(theta, covered + 50);
    }
    if (exhausted) return e;
    terms *= 2;
    if (terms > 1 << 20) throw Error("linearize: expansion failed to cover sqrt(n)");
  }
}

long long select_j_in(const Expansion& e, long long n) {
  BigInt nn(n);
  for (long long j = 0; j <= e.top(); ++j)
    if (e.q(j - 1) * e.q(j - 1) <= nn && nn < e.q(j) * e.q(j)) return j;
  throw IndexUnavailable("select_j: expansion exhausted below sqrt(n)");
}

// δ_k = (-1)^k θ_{k+2} / (q_k + θ_{k+2} q_{k+1}); for exhausted expansions the
// limit θ_{k+2} -> ∞ gives (-1)^k / q_{k+1}, and δ_m = 0 for terminated
// rationals (q_m θ - p_m = 0 exactly).
double delta_k(const Expansion& e, long long k) {
  double sign = (k % 2 == 0) ? 1.0 : -1.0;
  if (k + 2 <= e.top()) {
    double th = contfrac::tail_double(e.cf, k + 2);
    return sign * th / (e.qd(k) + th * e.qd(k + 1));
  }
  if (k + 1 <= e.top()) return sign / e.qd(k + 1);  // θ_{k+2} = ∞
  return 0.0;  // k = m for a terminated expansion: q_m θ = p_m exactly
}

LinearModel model_at(const Expansion& e, long long n) {
  long long j;
  bool degenerate = false;
  try {
    j = select_j_in(e, n);
  } catch (const IndexUnavailable&) {
    if (!e.cf.terminated && e.cf.exact)
      throw;
    // past the last denominator: final pair of steps, θ_{m+1} = ∞ limit
    j = e.top() + 1;
    degenerate = true;
  }
  long long k1 = degenerate ? j - 2 : j - 1;
  long long k2 = degenerate ? j - 1 : j;

  LinearModel m;
  m.j = j;
  double sqrt_n = std::sqrt(static_cast<double>(n));
  if (!e.q(k1).fits_int64() || !e.q(k2).fits_int64())
    throw Error("linearize: denominators exceed int64");
  long long s1 = e.q(k1).to_int64();
  long long s2 = e.q(k2).to_int64();
  m.q_jm1 = s1;
  m.q_j = s2;

  double d1 = delta_k(e, k1);
  double d2 = delta_k(e, k2);
  std::complex<double> v1(static_cast<double>(s1) / (2.0 * sqrt_n), kTwoPi * sqrt_n * d1);
  std::complex<double> v2(static_cast<double>(s2) / (2.0 * sqrt_n), kTwoPi * sqrt_n * d2);

  m.error.n = static_cast<double>(n);
  m.error.q1 = static_cast<double>(s1);
  m.error.q2 = static_cast<double>(s2);
  m.error.delta1 = d1;
  m.error.delta2 = d2;

  double det = v1.real() * v2.imag() - v1.imag() * v2.real();
  m.basis.orientation = det >= 0 ? +1 : -1;
  if (det >= 0) {
    m.basis.v1 = v1;
    m.basis.v2 = v2;
    m.basis.step1 = s1;
    m.basis.step2 = s2;
  } else {
    m.basis.v1 = v2;
    m.basis.v2 = v1;
    m.basis.step1 = s2;
    m.basis.step2 = s1;
  }
  return m;
}

}  // namespace

double LatticeBasis::shortest() const {
  // shortest nonzero vector over a small coefficient box (basis is reduced
  // enough that |a|,|b| <= 2 suffices at these aspect ratios)
  double best = std::numeric_limits<double>::infinity();
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      if (a == 0 && b == 0) continue;
      best = std::min(best, std::abs(static_cast<double>(a) * v1 +
                                     static_cast<double>(b) * v2));
    }
  return best;
}

std::complex<double> LinearizationError::evaluate(double a, double b) const {
  double s = a * q1 + b * q2;
  double delta = a * delta1 + b * delta2;
  double sqrt_n = std::sqrt(n);
  std::complex<double> out(-s * s / (8.0 * n * sqrt_n), 0.0);
  out += std::complex<double>(0.0, kPi / sqrt_n * s * delta);
  out += std::complex<double>(-2.0 * kPi * kPi * sqrt_n * delta * delta, 0.0);
  return out;
}

long long select_j(const RealParam& theta, long long n) {
  if (n < 1) throw Error("select_j: n must be >= 1");
  Expansion e = expand_past_sqrt(theta, n);
  return select_j_in(e, n);
}

LinearModel linear_model(const RealParam& theta, long long n) {
  if (n < 1) throw Error("linear_model: n must be >= 1");
  Expansion e = expand_past_sqrt(theta, n);
  long long j = select_j_in(e, n);  // propagate IndexUnavailable per contract
  (void)j;
  return model_at(e, n);
}

namespace {

constexpr long double kPiL = 3.14159265358979323846264338328L;

// tail θ_k evaluated in long double: τ points can sit within 1e-7 of the real
// axis, where double rounding alone costs ~1e-6 of hyperbolic distance
long double tail_ld(const Expansion& e, long long k) {
  if (k > e.top()) return std::numeric_limits<long double>::infinity();
  if (static_cast<size_t>(k) < e.cf.tail_values.size()) {
    const RealParam& v = e.cf.tail_values[static_cast<size_t>(k)];
    if (const auto* r = v.as_rational())
      return static_cast<long double>(r->num.to_double()) /
             static_cast<long double>(r->den.to_double());
    if (const auto* s = v.as_surd())
      return (static_cast<long double>(s->a.to_double()) +
              static_cast<long double>(s->b.to_double()) *
                  sqrtl(static_cast<long double>(s->d))) /
             static_cast<long double>(s->c.to_double());
  }
  long double v = static_cast<long double>(e.cf.coefficients.back());
  for (size_t i = e.cf.coefficients.size() - 1; i-- > static_cast<size_t>(k);)
    v = static_cast<long double>(e.cf.coefficients[i]) + 1.0L / v;
  return v;
}

struct TauLD {
  long double x, y;
};

TauLD tau_ld(const Expansion& e, long long j, double t) {
  long double sign = (j % 2 == 0) ? 1.0L : -1.0L;
  long double th_j = tail_ld(e, j);
  long double th_j1 = tail_ld(e, j + 1);
  auto qL = [&](long long k) { return static_cast<long double>(e.q(k).to_double()); };
  long double denom_top = j == 0 ? 1.0L : qL(j - 2) + th_j * qL(j - 1);
  long double denom_bot = qL(j - 1) + th_j1 * qL(j);
  long double nr = qL(j - 1), ni = -sign * 4.0L * kPiL * t / denom_top;
  long double dr = qL(j), di = sign * 4.0L * kPiL * t / denom_bot;
  long double mag = dr * dr + di * di;
  long double vr = (nr * dr + ni * di) / mag;
  long double vi = (ni * dr - nr * di) / mag;
  return {-sign * vr, -sign * vi};
}

}  // namespace

TauPoint tau(const RealParam& theta, long long j, double t) {
  if (j < 0) throw Error("tau: j must be >= 0");
  if (!(t > 0)) throw Error("tau: t must be positive");
  Expansion e = expand_for(theta, j + 50);
  if (j + 1 > e.top())
    throw TailUndefined("tau: expansion too short for this j");
  TauLD v = tau_ld(e, j, t);
  TauPoint out;
  out.j = j;
  out.t = t;
  out.value = hyperbolic::HPoint{static_cast<double>(v.x), static_cast<double>(v.y)};
  return out;
}

hyperbolic::HPoint tau_reduced(const RealParam& theta, long long j, double t) {
  if (j < 0) throw Error("tau_reduced: j must be >= 0");
  if (!(t > 0)) throw Error("tau_reduced: t must be positive");
  Expansion e = expand_for(theta, j + 50);
  if (j + 1 > e.top())
    throw TailUndefined("tau_reduced: expansion too short for this j");
  TauLD v = tau_ld(e, j, t);
  // τ_j can hug the real axis; reducing such a point walks the continued
  // fraction of Re numerically and loses precision. Lift to the tame region
  // first with the exact integer chain τ_0 = M_0 ... M_{j-1} τ_j.
  if (j >= 1) {
    long long a = 1, b = 0, c = 0, d = 1;
    bool ok = true;
    for (long long k = 0; k < j && ok; ++k) {
      long long ak1 = e.cf.coefficients[static_cast<size_t>(k + 1)];
      long long m00 = (k % 2 == 0) ? ak1 : -ak1;
      // multiply [[a,b],[c,d]] * [[m00, -1], [1, 0]]
      long long na = a * m00 + b, nb = -a;
      long long nc = c * m00 + d, nd = -c;
      if (std::abs(na) > (1ll << 60) || std::abs(nc) > (1ll << 60)) ok = false;
      a = na;
      b = nb;
      c = nc;
      d = nd;
    }
    if (ok) {
      long double den_r = static_cast<long double>(c) * v.x + static_cast<long double>(d);
      long double den_i = static_cast<long double>(c) * v.y;
      long double num_r = static_cast<long double>(a) * v.x + static_cast<long double>(b);
      long double num_i = static_cast<long double>(a) * v.y;
      long double mag = den_r * den_r + den_i * den_i;
      if (mag > 0) {
        TauLD lifted{(num_r * den_r + num_i * den_i) / mag,
                     (num_i * den_r - num_r * den_i) / mag};
        if (lifted.y > 0) v = lifted;
      }
    }
  }
  // fundamental-domain reduction in long double before dropping precision
  long double x = v.x, y = v.y;
  for (int it = 0; it < 20000; ++it) {
    long double shift = floorl(x + 0.5L);
    x -= shift;
    long double norm2 = x * x + y * y;
    if (norm2 >= 1.0L - 1e-18L) {
      if (norm2 <= 1.0L + 1e-18L && x < 0.0L) {
        long double nx = -x / norm2, ny = y / norm2;
        if (nx < 0.5L) {
          x = nx;
          y = ny;
        }
      }
      return hyperbolic::HPoint{static_cast<double>(x), static_cast<double>(y)};
    }
    long double nx = -x / norm2, ny = y / norm2;
    x = nx;
    y = ny;
  }
  throw ReductionOverflow("tau_reduced: reduction failed");
}

double closeness(const RealParam& theta, long long n, double R, double slack) {
  if (n < 1) throw Error("closeness: n must be >= 1");
  double sqrt_n = std::sqrt(static_cast<double>(n));
  if (sqrt_n <= R + slack)
    throw Error("closeness: disc of radius R must avoid the origin");

  PhaseEvaluator phase(theta);
  std::complex<double> anchor = phyllo_point(phase, n);
  double reach = R + slack;

  // actual points of φ_θ(N) in the slack disc
  std::vector<std::complex<double>> a_pts;
  std::vector<bool> a_mand;
  double lo_r = sqrt_n - reach - 0.5, hi_r = sqrt_n + reach + 0.5;
  long long m_lo = std::max<long long>(0, static_cast<long long>(lo_r * lo_r));
  long long m_hi = static_cast<long long>(hi_r * hi_r) + 1;
  for (long long m = m_lo; m <= m_hi; ++m) {
    std::complex<double> z = phyllo_point(phase, m);
    double d = std::abs(z - anchor);
    if (d <= reach) {
      a_pts.push_back(z);
      a_mand.push_back(d <= R);
    }
  }

  // affine lattice anchored at φ_θ(n), oriented by the linear-model frame
  Expansion e = expand_past_sqrt(theta, n);
  LinearModel model = model_at(e, n);
  double ang = kTwoPi * phase.frac(n);
  std::complex<double> rot(std::cos(ang), std::sin(ang));
  std::complex<double> w1 = model.basis.v1 * rot;
  std::complex<double> w2 = model.basis.v2 * rot;
  double det = std::abs(model.basis.det());
  long long a_range = static_cast<long long>(reach * std::abs(w2) / det) + 2;
  long long b_range = static_cast<long long>(reach * std::abs(w1) / det) + 2;

  std::vector<std::complex<double>> b_base;
  std::vector<bool> b_mand;
  double pad = 0.3;  // keep optional band membership stable under the shift search
  for (long long a = -a_range; a <= a_range; ++a)
    for (long long b = -b_range; b <= b_range; ++b) {
      std::complex<double> z = anchor + static_cast<double>(a) * w1 +
                               static_cast<double>(b) * w2;
      double d = std::abs(z - anchor);
      if (d <= reach - pad) {
        b_base.push_back(z);
        b_mand.push_back(d <= R);
      }
    }

  // best-fit member of the affine class: search the lattice translation,
  // keeping rotation and scale pinned to the linear-model frame
  auto eval = [&](std::complex<double> shift) {
    std::vector<std::complex<double>> b_pts = b_base;
    for (auto& z : b_pts) z += shift;
    try {
      return matching::bottleneck_match(a_pts, a_mand, b_pts, b_mand, slack).eps;
    } catch (const MatchingInfeasible&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  std::complex<double> radial = anchor / std::abs(anchor);
  double c = R * R / (4.0 * sqrt_n);  // curvature scale of the expected offset
  std::complex<double> best_shift = 0.0;
  double best = eval(0.0);
  for (double s : {-1.5, -1.0, -0.5}) {
    double e2 = eval(s * c * radial);
    if (e2 < best) {
      best = e2;
      best_shift = s * c * radial;
    }
  }
  double step = 0.5 * c;
  std::complex<double> tangent(-radial.imag(), radial.real());
  for (int iter = 0; iter < 24 && step > 5e-3 * c; ++iter) {
    bool improved = false;
    for (auto dir : {radial, -radial, tangent, -tangent}) {
      double e2 = eval(best_shift + step * dir);
      if (e2 < best - 1e-12) {
        best = e2;
        best_shift += step * dir;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  if (!std::isfinite(best))
    throw MatchingInfeasible("closeness: no covering within slack");
  return best;
}

std::vector<long long> nearest_steps(const RealParam& theta, long long n, int k) {
  if (n < 1 || k < 1) throw Error("nearest_steps: require n >= 1, k >= 1");
  Expansion e = expand_past_sqrt(theta, n);
  long long q_ceiling;
  try {
    long long j = select_j_in(e, n);
    q_ceiling = 4 * e.q(j).to_int64();
  } catch (const IndexUnavailable&) {
    q_ceiling = 4 * e.q(e.top()).to_int64();
  }
  PhaseEvaluator phase(theta);
  std::complex<double> z0 = phyllo_point(phase, n);
  std::vector<std::pair<double, long long>> dist;
  for (long long q = 1; q <= q_ceiling; ++q)
    dist.emplace_back(std::abs(phyllo_point(phase, n + q) - z0), q);
  std::sort(dist.begin(), dist.end());
  std::vector<long long> out;
  for (int i = 0; i < k && i < static_cast<int>(dist.size()); ++i)
    out.push_back(dist[static_cast<size_t>(i)].second);
  return out;
}

}  // namespace phyllo::linearize
