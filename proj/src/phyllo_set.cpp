#include "phyllo/phyllo_set.hpp"

#include <algorithm>
#include <cmath>

#include "phyllo/errors.hpp"

namespace phyllo {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

struct DD {
  double hi = 0.0, lo = 0.0;
};

DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

DD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

// BigInt holding exactly the value of a (finite, integral-magnitude) double
BigInt bigint_from_double(double v) {
  int e = 0;
  double m = std::frexp(v, &e);  // v = m * 2^e, |m| in [0.5, 1)
  long long mi = static_cast<long long>(std::ldexp(m, 53));
  e -= 53;
  BigInt out(mi);
  if (e > 0) out <<= static_cast<unsigned>(e);
  if (e < 0) out >>= static_cast<unsigned>(-e);
  return out;
}

// {θ/divisor} * 2^128 as an integer in [0, 2^128)
BigInt frac_q128(const RealParam& theta, long long divisor) {
  if (const auto* r = theta.as_rational()) {
    BigInt den = r->den * BigInt(divisor);
    BigInt q, rem;
    BigInt::divmod_floor(r->num, den, q, rem);
    return (rem << 128) / den;
  }
  const auto* s = theta.as_surd();
  BigInt c = s->c * BigInt(divisor);
  BigInt fb = BigInt::isqrt(s->b * s->b * BigInt(s->d));
  if (s->b.sign() < 0) fb = -fb - BigInt(1);
  BigInt f, rem;
  BigInt::divmod_floor(s->a + fb, c, f, rem);
  BigInt t = ((s->a - f * c) << 128);
  BigInt root = BigInt::isqrt(((s->b * s->b * BigInt(s->d)) << 256));
  t += s->b.sign() >= 0 ? root : -root - BigInt(1);
  return t / c;
}

}  // namespace

PhaseEvaluator::PhaseEvaluator(const RealParam& theta, long long divisor) {
  if (divisor < 1) throw Error("PhaseEvaluator: divisor must be >= 1");
  if (const auto* f = theta.as_float()) {
    double m = static_cast<double>(divisor);
    double x = f->x / m;
    double corr = std::fma(x, -m, f->x) / m;  // residual of the division
    double fl = std::floor(x);
    DD s = two_sum(x - fl, corr);
    hi_ = s.hi;
    lo_ = s.lo;
    return;
  }
  BigInt q128 = frac_q128(theta, divisor);
  double hi = q128.to_double();  // truncated to 53 bits
  BigInt rest = q128 - bigint_from_double(hi);
  hi_ = std::ldexp(hi, -128);
  lo_ = std::ldexp(rest.to_double(), -128);
}

double PhaseEvaluator::frac(long long n) const {
  if (n < 0) throw Error("PhaseEvaluator: negative index");
  double nd = static_cast<double>(n);
  DD p = two_prod(nd, hi_);
  double tail = std::fma(nd, lo_, p.lo);
  DD s = two_sum(p.hi, tail);
  double f = (s.hi - std::floor(s.hi)) + s.lo;
  f -= std::floor(f);
  if (f >= 1.0) f -= 1.0;
  if (f < 0.0) f += 1.0;
  return f;
}

std::complex<double> phyllo_point(const PhaseEvaluator& phase, long long n) {
  double ang = kTwoPi * phase.frac(n);
  double r = std::sqrt(static_cast<double>(n));
  return {r * std::cos(ang), r * std::sin(ang)};
}

PhylloSet generate(const RealParam& theta, long long n_max) {
  if (n_max < 0) throw Error("generate: n_max must be >= 0");
  PhylloSet set;
  set.theta = theta;
  set.whorl = 1;
  set.points.reserve(static_cast<size_t>(n_max + 1));
  PhaseEvaluator phase(theta);
  for (long long n = 0; n <= n_max; ++n) {
    auto z = phyllo_point(phase, n);
    set.points.push_back({n, z.real(), z.imag()});
  }
  return set;
}

PhylloSet generate_whorled(const RealParam& theta, long long d, long long n_max) {
  if (d < 1) throw Error("generate_whorled: d must be >= 1");
  if (n_max < 0) throw Error("generate_whorled: n_max must be >= 0");
  PhylloSet set;
  set.theta = theta;
  set.whorl = d;
  set.points.reserve(static_cast<size_t>((n_max + 1) * d));
  PhaseEvaluator phase(theta, d);
  double invsqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  for (long long n = 0; n <= n_max; ++n) {
    double base = phase.frac(n);
    double r = std::sqrt(static_cast<double>(n)) * invsqrt_d;
    if (n == 0) {
      set.points.push_back({0, 0.0, 0.0});  // one origin, not d copies
      continue;
    }
    for (long long k = 0; k < d; ++k) {
      double f = base + static_cast<double>(k) / static_cast<double>(d);
      if (f >= 1.0) f -= 1.0;
      double ang = kTwoPi * f;
      set.points.push_back({n * d + k, r * std::cos(ang), r * std::sin(ang)});
    }
  }
  return set;
}

MetricStats metric_stats(const PhylloSet& set, double R, double margin) {
  if (!(R > 0) || !(margin > 0)) throw Error("metric_stats: R and margin must be positive");
  double reach = 0.0;
  for (const auto& p : set.points) reach = std::max(reach, p.radius());
  if (reach + 1e-9 < R + margin)
    throw InsufficientPoints("metric_stats: set does not extend to R + margin");

  // spatial hash grid over points with |z| <= R + margin
  const double cell = 2.0;
  const int half = static_cast<int>(std::ceil((R + margin) / cell)) + 1;
  const int dim = 2 * half + 1;
  std::vector<std::vector<int>> grid(static_cast<size_t>(dim) * dim);
  std::vector<const PhylloPoint*> pts;
  auto cell_of = [&](double x, double y) {
    int cx = static_cast<int>(std::floor(x / cell)) + half;
    int cy = static_cast<int>(std::floor(y / cell)) + half;
    return std::pair<int, int>(cx, cy);
  };
  for (const auto& p : set.points) {
    if (p.radius() > R + margin) continue;
    auto [cx, cy] = cell_of(p.x, p.y);
    if (cx < 0 || cy < 0 || cx >= dim || cy >= dim) continue;
    grid[static_cast<size_t>(cy) * dim + cx].push_back(static_cast<int>(pts.size()));
    pts.push_back(&p);
  }

  MetricStats stats;
  // min pairwise gap among points inside |z| <= R
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i) {
    if (pts[i]->radius() > R) continue;
    auto [cx, cy] = cell_of(pts[i]->x, pts[i]->y);
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        int nx = cx + dx, ny = cy + dy;
        if (nx < 0 || ny < 0 || nx >= dim || ny >= dim) continue;
        for (int j : grid[static_cast<size_t>(ny) * dim + nx]) {
          if (static_cast<size_t>(j) <= i) continue;
          double d = std::abs(pts[i]->pos() - pts[j]->pos());
          if (pts[j]->radius() <= R && d < best) best = d;
        }
      }
  }
  if (!std::isfinite(best)) {
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        if (pts[i]->radius() > R || pts[j]->radius() > R) continue;
        best = std::min(best, std::abs(pts[i]->pos() - pts[j]->pos()));
      }
  }
  stats.min_gap = best;

  // covering radius on a grid of pitch <= margin/4 inside |z| <= R - margin
  double pitch = margin / 4.0;
  stats.grid_pitch = pitch;
  double rin = R - margin;
  double worst = 0.0;
  auto nearest_dist = [&](double x, double y) {
    auto [cx, cy] = cell_of(x, y);
    double bestd = std::numeric_limits<double>::infinity();
    for (int shell = 0; shell <= dim; ++shell) {
      for (int dy = -shell; dy <= shell; ++dy)
        for (int dx = -shell; dx <= shell; ++dx) {
          if (std::max(std::abs(dx), std::abs(dy)) != shell) continue;
          int nx = cx + dx, ny = cy + dy;
          if (nx < 0 || ny < 0 || nx >= dim || ny >= dim) continue;
          for (int j : grid[static_cast<size_t>(ny) * dim + nx]) {
            double d = std::hypot(x - pts[static_cast<size_t>(j)]->x,
                                  y - pts[static_cast<size_t>(j)]->y);
            if (d < bestd) bestd = d;
          }
        }
      // cells beyond this shell are at distance >= shell*cell from the query
      if (bestd <= cell * shell + 1e-12) return bestd;
    }
    return bestd;
  };
  for (double y = -rin; y <= rin; y += pitch)
    for (double x = -rin; x <= rin; x += pitch) {
      if (x * x + y * y > rin * rin) continue;
      double d = nearest_dist(x, y);
      if (d > worst) worst = d;
    }
  stats.covering_radius = worst + pitch * 0.70710678118654752;

  for (const auto& p : set.points)
    if (p.radius() <= R) ++stats.disc_count;
  return stats;
}

}  // namespace phyllo
