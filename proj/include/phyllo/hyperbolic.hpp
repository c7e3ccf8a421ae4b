#pragma once

#include <complex>
#include <vector>

#include "phyllo/real_param.hpp"

namespace phyllo::hyperbolic {

/// Point of the Poincaré half-plane, y > 0.
struct HPoint {
  double x = 0.0;
  double y = 1.0;
  [[nodiscard]] std::complex<double> z() const { return {x, y}; }
  static HPoint from(std::complex<double> z) { return {z.real(), z.imag()}; }
};

/// Real Möbius map z -> (az+b)/(cz+d); acts on H when det > 0.
struct MobiusMap {
  double a = 1, b = 0, c = 0, d = 1;
  [[nodiscard]] double det() const { return a * d - b * c; }
};

/// Element of the modular group (integer entries, det = +1), canonical sign.
struct ModularMap {
  long long a = 1, b = 0, c = 0, d = 1;
  [[nodiscard]] long long det() const { return a * d - b * c; }
  [[nodiscard]] ModularMap inverse() const { return canonical({d, -b, -c, a}); }
  friend ModularMap operator*(const ModularMap& l, const ModularMap& r) {
    return canonical({l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                      l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d});
  }
  static ModularMap canonical(ModularMap m) {
    // representative in PSL2(Z): first nonzero of (c, d, a) positive
    bool flip = m.c < 0 || (m.c == 0 && m.d < 0);
    if (flip) return {-m.a, -m.b, -m.c, -m.d};
    return m;
  }
  bool operator==(const ModularMap&) const = default;
  [[nodiscard]] MobiusMap real() const {
    return {static_cast<double>(a), static_cast<double>(b), static_cast<double>(c),
            static_cast<double>(d)};
  }
};

/// Geodesic support: vertical line x = x0 or half-circle centered on R.
struct GeodesicArc {
  enum class Kind { Vertical, Circle };
  Kind kind = Kind::Vertical;
  double x0 = 0.0;      // Vertical
  double center = 0.0;  // Circle
  double radius = 0.0;  // Circle, > 0
};

struct ReduceResult {
  HPoint point;
  ModularMap map;  // map * input = point
};

HPoint mobius_apply(const MobiusMap& g, const HPoint& z);
HPoint mobius_apply(const ModularMap& g, const HPoint& z);

/// Reduces z into M = { |z| >= 1, |Re z| <= 1/2 } with the deterministic
/// boundary convention Re in [-1/2, 1/2) and, on |z| = 1, Re >= 0.
ReduceResult reduce_to_fundamental_domain(const HPoint& z);

double hyperbolic_distance(const HPoint& z1, const HPoint& z2);

/// min over the modular group of d(z1, g z2).
double orbit_distance(const HPoint& z1, const HPoint& z2);

/// γ_θ(t) = 4iπt / (1 + 4iπ{θ}t); vertical half-line when θ is integral.
HPoint phyllotactic_geodesic(const RealParam& theta, double t);
HPoint phyllotactic_geodesic(double theta_frac, double t);

/// Image of t -> (a·it + b)/(c·it + d): half-circle per the half-circle lemma,
/// vertical line when c = 0 or d = 0. Throws DegenerateMap if ad - bc <= 0.
GeodesicArc geodesic_from_matrix(double a, double b, double c, double d);

/// Supporting arc of γ_θ (boundary points 0 and 1/{θ}).
GeodesicArc phyllotactic_arc(const RealParam& theta);

/// The alternative geodesic point (1 + 4iπtθ(1+θ²)) / (θ − 4iπt(1+θ²)).
HPoint alt_geodesic(const RealParam& theta, double t);

/// Finite-difference hyperbolic speed |γ'|/Im γ of the phyllotactic geodesic;
/// contract: ≈ 1/t.
double geodesic_speed_check(const RealParam& theta, double t);

/// The golden closed geodesic γ̃(t) = ((-1+√5)it - 1 - √5) / (2(it+1)).
HPoint golden_closed_geodesic(double t);

/// Candidate modular maps (words in S, T of bounded length); used by the
/// orbit-distance search and by lift heuristics.
const std::vector<ModularMap>& candidate_maps();

}  // namespace phyllo::hyperbolic
