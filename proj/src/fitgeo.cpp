#include "phyllo/fitgeo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "phyllo/errors.hpp"
#include "phyllo/predicates.hpp"

namespace phyllo::fitgeo {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

// largest-cluster representative: rank noise scrambles a sizable minority of
// increments into side clusters, so the mode is the robust location estimate
double mode_of(std::vector<double> vals, double width) {
  std::sort(vals.begin(), vals.end());
  size_t best_lo = 0, best_count = 0;
  for (size_t lo = 0, hi = 0; lo < vals.size(); ++lo) {
    if (hi < lo) hi = lo;
    while (hi < vals.size() && vals[hi] - vals[lo] <= width) ++hi;
    if (hi - lo > best_count) {
      best_count = hi - lo;
      best_lo = lo;
    }
  }
  double sum = 0.0;
  for (size_t i = best_lo; i < best_lo + best_count; ++i) sum += vals[i];
  return sum / static_cast<double>(std::max<size_t>(1, best_count));
}

std::complex<double> model_point(const FitResult& f, long long n) {
  double r = std::sqrt(std::max(0.0, static_cast<double>(n) + f.gamma));
  double ang = kTwoPi * f.theta * static_cast<double>(n);
  return f.A + f.C * std::polar(r, ang);
}

// solves the 6x6 normal equations (JtJ + lambda diag) x = Jtr in place
bool solve_spd(double m[6][6], double rhs[6], double out[6]) {
  double a[6][7];
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) a[i][j] = m[i][j];
    a[i][6] = rhs[i];
  }
  for (int col = 0; col < 6; ++col) {
    int piv = col;
    for (int r = col + 1; r < 6; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-300) return false;
    std::swap_ranges(a[col], a[col] + 7, a[piv]);
    for (int r = 0; r < 6; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      for (int j = col; j < 7; ++j) a[r][j] -= f * a[col][j];
    }
  }
  for (int i = 0; i < 6; ++i) out[i] = a[i][6] / a[i][i];
  return true;
}

double sum_sq_residual(const Observation& obs, const FitResult& f) {
  double s = 0.0;
  for (size_t k = 0; k < obs.points.size(); ++k)
    s += std::norm(obs.points[k] - model_point(f, f.assignment[k]));
  return s;
}

// one Levenberg-Marquardt pass over the continuous parameters
void refine_parameters(const Observation& obs, FitResult& f) {
  const size_t n_pts = obs.points.size();
  double lambda = 1e-6;
  double cur = sum_sq_residual(obs, f);
  for (int iter = 0; iter < 80; ++iter) {
    double jtj[6][6] = {};
    double jtr[6] = {};
    for (size_t k = 0; k < n_pts; ++k) {
      long long n = f.assignment[k];
      double root = std::sqrt(std::max(1e-12, static_cast<double>(n) + f.gamma));
      std::complex<double> phase = std::polar(1.0, kTwoPi * f.theta * static_cast<double>(n));
      std::complex<double> res = obs.points[k] - (f.A + f.C * root * phase);
      // derivatives of the model w.r.t. (Ax, Ay, Cx, Cy, theta, gamma)
      std::complex<double> d[6];
      d[0] = {1.0, 0.0};
      d[1] = {0.0, 1.0};
      d[2] = root * phase;
      d[3] = std::complex<double>(0.0, 1.0) * root * phase;
      d[4] = f.C * root * phase * std::complex<double>(0.0, kTwoPi * static_cast<double>(n));
      d[5] = f.C * phase / (2.0 * root);
      for (int i = 0; i < 6; ++i) {
        jtr[i] += res.real() * d[i].real() + res.imag() * d[i].imag();
        for (int j = i; j < 6; ++j)
          jtj[i][j] += d[i].real() * d[j].real() + d[i].imag() * d[j].imag();
      }
    }
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < i; ++j) jtj[i][j] = jtj[j][i];

    double step[6];
    double damped[6][6];
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        damped[i][j] = jtj[i][j] + (i == j ? lambda * (1.0 + jtj[i][i]) : 0.0);
    if (!solve_spd(damped, jtr, step)) break;

    FitResult trial = f;
    trial.A += std::complex<double>(step[0], step[1]);
    trial.C += std::complex<double>(step[2], step[3]);
    trial.theta += step[4];
    trial.gamma += step[5];
    double tri = sum_sq_residual(obs, trial);
    if (tri < cur) {
      double step_norm = 0;
      for (double s : step) step_norm += s * s;
      f = trial;
      cur = tri;
      lambda = std::max(1e-12, lambda * 0.3);
      if (std::sqrt(step_norm) < 1e-12) break;
    } else {
      lambda *= 8.0;
      if (lambda > 1e10) break;
    }
  }
}

// re-assigns observations to nearest model indices, keeping injectivity
bool reassign(const Observation& obs, FitResult& f) {
  const size_t n_pts = obs.points.size();
  std::vector<long long> fresh(n_pts);
  for (size_t k = 0; k < n_pts; ++k) {
    double rr = std::norm(obs.points[k] - f.A) / std::norm(f.C);
    long long guess = std::llround(rr - f.gamma);
    long long best_n = std::max<long long>(0, guess);
    double best_d = std::numeric_limits<double>::infinity();
    for (long long n = std::max<long long>(0, guess - 4); n <= guess + 4; ++n) {
      double d = std::abs(obs.points[k] - model_point(f, n));
      if (d < best_d) {
        best_d = d;
        best_n = n;
      }
    }
    fresh[k] = best_n;
  }
  // resolve collisions by radial order
  std::vector<size_t> order(n_pts);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fresh[a] < fresh[b]; });
  long long prev = -1;
  for (size_t idx : order) {
    if (fresh[idx] <= prev) fresh[idx] = prev + 1;
    prev = fresh[idx];
  }
  bool changed = fresh != f.assignment;
  f.assignment = std::move(fresh);
  return changed;
}

}  // namespace

Observation make_observation(std::vector<std::complex<double>> pts, double scale) {
  if (pts.size() < 30) throw Error("observation: need at least 30 points");
  std::vector<std::complex<double>> sorted = pts;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  for (size_t i = 1; i < sorted.size(); ++i)
    if (std::abs(sorted[i] - sorted[i - 1]) < 1e-9)
      throw Error("observation: duplicate points");
  Observation obs;
  obs.points = std::move(pts);
  obs.scale = scale;
  return obs;
}

FitResult fit_sunflower(const Observation& obs, const std::optional<FitResult>& init) {
  const size_t n_pts = obs.points.size();
  if (n_pts < 30) throw Error("fit_sunflower: need at least 30 points");
  {
    bool collinear = true;
    for (size_t i = 2; i < n_pts && collinear; ++i)
      if (geom::orient2d(obs.points[0].real(), obs.points[0].imag(), obs.points[1].real(),
                         obs.points[1].imag(), obs.points[i].real(),
                         obs.points[i].imag()) != 0)
        collinear = false;
    if (collinear) throw DegenerateData("fit_sunflower: collinear input");
  }

  FitResult f;
  if (init) {
    f = *init;
    if (f.assignment.size() != n_pts) f.assignment.clear();
  }
  if (f.assignment.empty()) {
    // radial rank from the centroid defines the initial index assignment
    std::complex<double> centroid = 0.0;
    for (const auto& p : obs.points) centroid += p;
    centroid /= static_cast<double>(n_pts);
    if (!init) f.A = centroid;
    std::vector<size_t> order(n_pts);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return std::abs(obs.points[a] - f.A) < std::abs(obs.points[b] - f.A);
    });
    f.assignment.resize(n_pts);
    for (size_t rank = 0; rank < n_pts; ++rank) f.assignment[order[rank]] = static_cast<long long>(rank);

    // divergence estimate: median of consecutive-rank angle increments is
    // robust to the occasional rank swap, then staged phase refinement. The
    // innermost ranks are skipped: the linear picture breaks down at the core.
    size_t k0 = std::min(n_pts / 4, std::max<size_t>(n_pts / 10, 4));
    std::vector<double> psi(n_pts);
    for (size_t k = 0; k < n_pts; ++k) psi[k] = std::arg(obs.points[order[k]] - f.A);
    std::vector<double> inc;
    for (size_t k = k0 + 1; k < n_pts; ++k)
      inc.push_back(std::remainder(psi[k] - psi[k - 1], kTwoPi));
    double theta_hat = mode_of(inc, 0.06) / kTwoPi;
    // sharpen by medians of lag-L phase increments, doubling the lag while the
    // current uncertainty keeps the wrap unambiguous
    for (size_t lag = 4; k0 + 2 * lag < n_pts; lag *= 4) {
      std::vector<double> vals;
      for (size_t k = k0; k + lag < n_pts; ++k)
        vals.push_back(std::remainder(
            psi[k + lag] - psi[k] - kTwoPi * theta_hat * static_cast<double>(lag), kTwoPi));
      if (vals.size() < 8) break;
      theta_hat += mode_of(vals, 0.03) / (kTwoPi * static_cast<double>(lag));
    }
    f.theta = theta_hat - std::floor(theta_hat);

    // radius regression |p - A|^2 = |C|^2 (n + gamma), core excluded
    double sn = 0, sr = 0, snn = 0, snr = 0, npts = 0;
    for (size_t k = 0; k < n_pts; ++k) {
      if (static_cast<size_t>(f.assignment[k]) < k0) continue;
      double nn = static_cast<double>(f.assignment[k]);
      double rr = std::norm(obs.points[k] - f.A);
      sn += nn;
      sr += rr;
      snn += nn * nn;
      snr += nn * rr;
      npts += 1.0;
    }
    double c2 = (npts * snr - sn * sr) / (npts * snn - sn * sn);
    double icpt = (sr - c2 * sn) / npts;
    c2 = std::max(c2, 1e-12);
    f.gamma = std::max(-0.5, icpt / c2);
    // phase offset of C, core excluded
    double cx = 0, cy = 0;
    for (size_t k = 0; k < n_pts; ++k) {
      if (static_cast<size_t>(f.assignment[k]) < k0) continue;
      double ang = std::arg(obs.points[k] - f.A) -
                   kTwoPi * f.theta * static_cast<double>(f.assignment[k]);
      cx += std::cos(ang);
      cy += std::sin(ang);
    }
    f.C = std::polar(std::sqrt(c2), std::atan2(cy, cx));
  }

  bool stable = false;
  int iter = 0;
  for (; iter < 60; ++iter) {
    // re-assignment first: the rank initialization can carry swapped indices
    // whose huge residuals would otherwise hijack the quadratic loss
    bool changed = reassign(obs, f);
    if (!changed && iter > 0) {
      stable = true;
      break;
    }
    refine_parameters(obs, f);
  }
  f.iterations = iter;
  f.converged = stable;
  f.theta -= std::floor(f.theta);
  f.rms_residual = std::sqrt(sum_sq_residual(obs, f) / static_cast<double>(n_pts));
  return f;
}

LocalInvariants local_invariants(const Observation& obs) {
  const auto& pts = obs.points;
  const size_t n_pts = pts.size();
  std::complex<double> centroid = 0.0;
  for (const auto& p : pts) centroid += p;
  centroid /= static_cast<double>(n_pts);

  LocalInvariants out;
  std::vector<std::pair<double, size_t>> by_radius;
  for (size_t i = 0; i < n_pts; ++i) by_radius.emplace_back(std::abs(pts[i] - centroid), i);
  std::sort(by_radius.begin(), by_radius.end());
  double hull_radius = by_radius.back().first;

  for (auto [radius, i] : by_radius) {
    if (radius > hull_radius - 3.0 || radius < 2.0) continue;  // skip rim and core
    // nearest neighbours
    std::vector<std::pair<double, size_t>> near;
    for (size_t j = 0; j < n_pts; ++j) {
      if (j == i) continue;
      double d = std::abs(pts[j] - pts[i]);
      if (d < 6.0) near.emplace_back(d, j);
    }
    std::sort(near.begin(), near.end());
    if (near.size() < 4) {
      ++out.skipped;
      continue;
    }
    auto opposite_of = [&](size_t u, size_t skip1, size_t skip2) -> long long {
      std::complex<double> du = pts[u] - pts[i];
      for (size_t c = 0; c < near.size() && c < 8; ++c) {
        size_t v = near[c].second;
        if (v == u || v == skip1 || v == skip2) continue;
        std::complex<double> dv = pts[v] - pts[i];
        double cosang = -(du.real() * dv.real() + du.imag() * dv.imag()) /
                        (std::abs(du) * std::abs(dv));
        if (cosang > std::cos(30.0 * kTwoPi / 360.0) &&
            std::abs(dv) < 1.6 * std::abs(du) && std::abs(du) < 1.6 * std::abs(dv))
          return static_cast<long long>(v);
      }
      return -1;
    };
    size_t u1 = near[0].second;
    long long v1 = opposite_of(u1, u1, u1);
    if (v1 < 0) {
      ++out.skipped;
      continue;
    }
    // second pair: first neighbour not aligned with the first spiral
    size_t u2 = SIZE_MAX;
    std::complex<double> d1 = pts[u1] - pts[i];
    for (size_t c = 1; c < near.size() && c < 8; ++c) {
      size_t cand = near[c].second;
      if (cand == static_cast<size_t>(v1)) continue;
      std::complex<double> d = pts[cand] - pts[i];
      double cross = std::abs(d1.real() * d.imag() - d1.imag() * d.real());
      if (cross > 0.4 * std::abs(d1) * std::abs(d)) {
        u2 = cand;
        break;
      }
    }
    if (u2 == SIZE_MAX) {
      ++out.skipped;
      continue;
    }
    long long v2 = opposite_of(u2, u1, static_cast<size_t>(v1));
    if (v2 < 0) {
      ++out.skipped;
      continue;
    }
    std::complex<double> chord1 = pts[u1] - pts[static_cast<size_t>(v1)];
    std::complex<double> chord2 = pts[u2] - pts[static_cast<size_t>(v2)];
    std::complex<double> tau = chord1 / chord2;
    if (tau.imag() < 0) tau = -tau;
    if (!(tau.imag() > 1e-12)) {
      ++out.skipped;
      continue;
    }
    auto red = hyperbolic::reduce_to_fundamental_domain(hyperbolic::HPoint::from(tau));
    out.reduced.push_back(red.point);
    out.radii.push_back(radius);
  }
  return out;
}

double arc_distance(const hyperbolic::HPoint& z, const hyperbolic::GeodesicArc& arc) {
  if (arc.kind == hyperbolic::GeodesicArc::Kind::Vertical)
    return std::asinh(std::abs(z.x - arc.x0) / z.y);
  double num = std::abs(std::norm(z.z() - arc.center) - arc.radius * arc.radius);
  return std::asinh(num / (2.0 * arc.radius * z.y));
}

GeodesicFit fit_geodesic(const std::vector<hyperbolic::HPoint>& invariants,
                         LiftStrategy strategy) {
  (void)strategy;
  if (invariants.size() < 5) throw Error("fit_geodesic: need at least 5 invariant points");

  // lift to a continuous branch by radius order (the input order)
  std::vector<hyperbolic::HPoint> lifted;
  lifted.push_back(invariants.front());
  std::vector<double> breakpoints;
  for (size_t k = 1; k < invariants.size(); ++k) {
    const auto& prev = lifted.back();
    hyperbolic::HPoint best = invariants[k];
    double best_d = hyperbolic::hyperbolic_distance(prev, best);
    for (const auto& g : hyperbolic::candidate_maps()) {
      hyperbolic::HPoint w = hyperbolic::mobius_apply(g, invariants[k]);
      double d = hyperbolic::hyperbolic_distance(prev, w);
      if (d < best_d) {
        best_d = d;
        best = w;
      }
    }
    if (best_d > 1.5) breakpoints.push_back(static_cast<double>(k));
    lifted.push_back(best);
  }
  if (!breakpoints.empty())
    throw LiftAmbiguous("fit_geodesic: branch continuity failed", breakpoints);

  auto loss = [&](double c, double r) {
    if (!(r > 0)) return std::numeric_limits<double>::infinity();
    hyperbolic::GeodesicArc arc;
    arc.kind = hyperbolic::GeodesicArc::Kind::Circle;
    arc.center = c;
    arc.radius = r;
    double s = 0.0;
    for (const auto& z : lifted) {
      double d = arc_distance(z, arc);
      s += d * d;
    }
    return s;
  };

  // Kasa algebraic circle through the lifted points as one starting point
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0, sxz = 0, syz = 0, sz = 0;
  for (const auto& p : lifted) {
    double x = p.x, y = p.y, zz = x * x + y * y;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    sxz += x * zz;
    syz += y * zz;
    sz += zz;
  }
  double n = static_cast<double>(lifted.size());
  // solve for circle x^2+y^2 + D x + E y + F = 0 with center (-D/2, -E/2)
  // constrained to centers on the real axis is done by the optimizer; the
  // algebraic solution only seeds it
  double det = sxx * n - sx * sx;
  double d0 = det != 0 ? (sxz * n - sz * sx) / det : 0.0;  // ~ 2*center
  double c_init = 0.5 * d0;
  double r_init = 0.0;
  for (const auto& p : lifted) r_init += std::hypot(p.x - c_init, p.y);
  r_init /= n;

  double lo_x = lifted.front().x, hi_x = lo_x;
  double spread = 0.0;
  for (const auto& p : lifted) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    spread = std::max(spread, std::abs(p.z()));
  }

  double best_c = c_init, best_r = std::max(1e-6, r_init);
  double best_loss = loss(best_c, best_r);
  auto consider = [&](double c, double r) {
    if (!(r > 0) || !std::isfinite(c) || !std::isfinite(r)) return;
    double l = loss(c, r);
    if (l < best_loss) {
      best_loss = l;
      best_c = c;
      best_r = r;
    }
  };
  for (int ci = 0; ci <= 4; ++ci)
    for (double rf : {0.1, 0.5, 1.0, 2.5, 10.0})
      consider(lo_x + (hi_x - lo_x) * ci / 4.0, std::max(1e-6, rf * spread));
  // circles centered on the axis through sample pairs: these reach centers far
  // outside the data's x-range when the samples hug a cusp
  size_t m = lifted.size();
  for (auto [i, j] : {std::pair<size_t, size_t>{0, m - 1}, {0, m / 2}, {m / 2, m - 1}}) {
    const auto& z1 = lifted[i];
    const auto& z2 = lifted[j];
    double dx = z2.x - z1.x;
    if (std::abs(dx) < 1e-14) continue;
    double c = (std::norm(z2.z()) - std::norm(z1.z())) / (2.0 * dx);
    consider(c, std::hypot(z1.x - c, z1.y));
  }

  // Nelder-Mead on (c, log r)
  auto eval = [&](double c, double lr) { return loss(c, std::exp(lr)); };
  struct Vertex {
    double c, lr, f;
  };
  std::array<Vertex, 3> simplex;
  simplex[0] = {best_c, std::log(best_r), 0};
  simplex[1] = {best_c + 0.05 * best_r + 1e-4, std::log(best_r), 0};
  simplex[2] = {best_c, std::log(best_r) + 0.05, 0};
  for (auto& v : simplex) v.f = eval(v.c, v.lr);
  for (int it = 0; it < 400; ++it) {
    std::sort(simplex.begin(), simplex.end(),
              [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    if (std::abs(simplex[2].f - simplex[0].f) <
        1e-16 + 1e-12 * std::abs(simplex[0].f))
      break;
    double cc = 0.5 * (simplex[0].c + simplex[1].c);
    double cl = 0.5 * (simplex[0].lr + simplex[1].lr);
    Vertex refl{cc + (cc - simplex[2].c), cl + (cl - simplex[2].lr), 0};
    refl.f = eval(refl.c, refl.lr);
    if (refl.f < simplex[0].f) {
      Vertex exp_{cc + 2.0 * (cc - simplex[2].c), cl + 2.0 * (cl - simplex[2].lr), 0};
      exp_.f = eval(exp_.c, exp_.lr);
      simplex[2] = exp_.f < refl.f ? exp_ : refl;
    } else if (refl.f < simplex[1].f) {
      simplex[2] = refl;
    } else {
      Vertex con{cc + 0.5 * (simplex[2].c - cc), cl + 0.5 * (simplex[2].lr - cl), 0};
      con.f = eval(con.c, con.lr);
      if (con.f < simplex[2].f) {
        simplex[2] = con;
      } else {
        for (int k = 1; k < 3; ++k) {
          simplex[k].c = 0.5 * (simplex[k].c + simplex[0].c);
          simplex[k].lr = 0.5 * (simplex[k].lr + simplex[0].lr);
          simplex[k].f = eval(simplex[k].c, simplex[k].lr);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(),
            [](const Vertex& a, const Vertex& b) { return a.f < b.f; });

  GeodesicFit fit;
  fit.arc.kind = hyperbolic::GeodesicArc::Kind::Circle;
  fit.arc.center = simplex[0].c;
  fit.arc.radius = std::exp(simplex[0].lr);
  double sum = 0.0;
  for (const auto& z : lifted) {
    double d = arc_distance(z, fit.arc);
    sum += d;
    fit.max_residual = std::max(fit.max_residual, d);
  }
  fit.mean_residual = sum / n;
  fit.endpoint_lo = fit.arc.center - fit.arc.radius;
  fit.endpoint_hi = fit.arc.center + fit.arc.radius;
  return fit;
}

}  // namespace phyllo::fitgeo
