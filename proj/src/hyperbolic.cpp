#include "phyllo/hyperbolic.hpp"

#include <array>
#include <cmath>
#include <set>

#include "phyllo/errors.hpp"

namespace phyllo::hyperbolic {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBoundaryTol = 1e-12;
}  // namespace

HPoint mobius_apply(const MobiusMap& g, const HPoint& z) {
  if (!(g.det() > 0)) throw DegenerateMap("mobius_apply: determinant must be positive");
  std::complex<double> w = (g.a * z.z() + g.b) / (g.c * z.z() + g.d);
  return HPoint::from(w);
}

HPoint mobius_apply(const ModularMap& g, const HPoint& z) {
  return mobius_apply(g.real(), z);
}

ReduceResult reduce_to_fundamental_domain(const HPoint& z) {
  if (!(z.y > 0)) throw Error("reduce: point must have positive imaginary part");
  std::complex<double> w = z.z();
  ModularMap g;  // identity
  const int max_iter = 10000;
  for (int it = 0; it < max_iter; ++it) {
    // translate Re into [-1/2, 1/2)
    double shift = std::floor(w.real() + 0.5);
    if (shift != 0.0) {
      if (std::abs(shift) > 4.6e18) throw ReductionOverflow("reduce: translation overflow");
      long long n = static_cast<long long>(shift);
      w -= shift;
      g = ModularMap{1, -n, 0, 1} * g;
    }
    double norm2 = std::norm(w);
    if (norm2 >= 1.0 - kBoundaryTol) {
      // boundary convention: points on |z| = 1 use the Re >= 0 representative,
      // unless inversion would land on the excluded Re = +1/2 corner
      if (norm2 <= 1.0 + kBoundaryTol && w.real() < -kBoundaryTol) {
        std::complex<double> cand = -1.0 / w;
        if (cand.real() < 0.5 - kBoundaryTol) {
          w = cand;
          g = ModularMap{0, -1, 1, 0} * g;
        }
      }
      return {HPoint::from(w), g};
    }
    w = -1.0 / w;
    g = ModularMap{0, -1, 1, 0} * g;
  }
  throw ReductionOverflow("reduce: iteration bound exceeded");
}

double hyperbolic_distance(const HPoint& z1, const HPoint& z2) {
  double dx = z1.x - z2.x, dy = z1.y - z2.y;
  double u = (dx * dx + dy * dy) / (2.0 * z1.y * z2.y);
  // acosh(1+u) evaluated stably for small u
  return std::log1p(u + std::sqrt(u * (u + 2.0)));
}

const std::vector<ModularMap>& candidate_maps() {
  static const std::vector<ModularMap> maps = [] {
    std::vector<ModularMap> out;
    std::set<std::array<long long, 4>> seen;
    auto push = [&](const ModularMap& m) {
      ModularMap c = ModularMap::canonical(m);
      if (seen.insert({c.a, c.b, c.c, c.d}).second) out.push_back(c);
    };
    std::vector<ModularMap> frontier = {ModularMap{}};
    push(ModularMap{});
    const ModularMap gens[] = {{1, 1, 0, 1}, {1, -1, 0, 1}, {0, -1, 1, 0}};
    for (int depth = 0; depth < 9; ++depth) {
      std::vector<ModularMap> next;
      for (const auto& m : frontier)
        for (const auto& gen : gens) {
          ModularMap p = ModularMap::canonical(gen * m);
          if (seen.insert({p.a, p.b, p.c, p.d}).second) {
            out.push_back(p);
            next.push_back(p);
          }
        }
      frontier = std::move(next);
    }
    return out;
  }();
  return maps;
}

double orbit_distance(const HPoint& z1, const HPoint& z2) {
  HPoint r1 = reduce_to_fundamental_domain(z1).point;
  HPoint r2 = reduce_to_fundamental_domain(z2).point;
  double best = hyperbolic_distance(r1, r2);
  for (const auto& g : candidate_maps()) {
    HPoint w = mobius_apply(g, r2);
    double d = hyperbolic_distance(r1, w);
    if (d < best) best = d;
  }
  return best;
}

HPoint phyllotactic_geodesic(double theta_frac, double t) {
  if (!(t > 0)) throw Error("phyllotactic_geodesic: t must be positive");
  double s = 4.0 * kPi * theta_frac * t;
  double denom = 1.0 + s * s;
  return {4.0 * kPi * theta_frac * t * (4.0 * kPi * t) / denom, 4.0 * kPi * t / denom};
}

HPoint phyllotactic_geodesic(const RealParam& theta, double t) {
  return phyllotactic_geodesic(theta.frac(), t);
}

GeodesicArc geodesic_from_matrix(double a, double b, double c, double d) {
  if (!(a * d - b * c > 0)) throw DegenerateMap("geodesic_from_matrix: ad - bc <= 0");
  GeodesicArc arc;
  if (c == 0.0) {
    arc.kind = GeodesicArc::Kind::Vertical;
    arc.x0 = b / d;
    return arc;
  }
  if (d == 0.0) {
    arc.kind = GeodesicArc::Kind::Vertical;
    arc.x0 = a / c;
    return arc;
  }
  arc.kind = GeodesicArc::Kind::Circle;
  arc.center = (a * d + b * c) / (2.0 * c * d);
  arc.radius = std::abs((a * d - b * c) / (2.0 * c * d));
  return arc;
}

GeodesicArc phyllotactic_arc(const RealParam& theta) {
  double f = theta.frac();
  if (f == 0.0) return geodesic_from_matrix(4.0 * kPi, 0.0, 0.0, 1.0);
  return geodesic_from_matrix(4.0 * kPi, 0.0, 4.0 * kPi * f, 1.0);
}

HPoint alt_geodesic(const RealParam& theta, double t) {
  if (!(t > 0)) throw Error("alt_geodesic: t must be positive");
  double th = theta.to_double();
  if (th == 0.0) throw Error("alt_geodesic: theta must be nonzero");
  std::complex<double> i4pt(0.0, 4.0 * kPi * t);
  double one_plus = 1.0 + th * th;
  std::complex<double> w = (1.0 + i4pt * th * one_plus) / (th - i4pt * one_plus);
  return HPoint::from(w);
}

double geodesic_speed_check(const RealParam& theta, double t) {
  if (!(t > 0)) throw Error("geodesic_speed_check: t must be positive");
  double f = theta.frac();
  double h = t * 6e-6;
  HPoint zp = phyllotactic_geodesic(f, t + h);
  HPoint zm = phyllotactic_geodesic(f, t - h);
  HPoint z0 = phyllotactic_geodesic(f, t);
  double deriv = std::abs(zp.z() - zm.z()) / (2.0 * h);
  return deriv / z0.y;
}

HPoint golden_closed_geodesic(double t) {
  const double s5 = std::sqrt(5.0);
  std::complex<double> it(0.0, t);
  std::complex<double> w = ((-1.0 + s5) * it - 1.0 - s5) / (2.0 * (it + 1.0));
  return HPoint::from(w);
}

}  // namespace phyllo::hyperbolic
