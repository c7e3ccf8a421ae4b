#include "phyllo/parastichy.hpp"

#include <algorithm>
#include <cmath>

#include "phyllo/errors.hpp"
#include "phyllo/hyperbolic.hpp"
#include "phyllo/linearize.hpp"

namespace phyllo::parastichy {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;

int sign_of(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

double angle_between(const std::complex<double>& u, const std::complex<double>& v) {
  double c = (u.real() * v.real() + u.imag() * v.imag()) / (std::abs(u) * std::abs(v));
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

}  // namespace

ParastichyReport families_at(const RealParam& theta, long long n) {
  if (n < 1) throw Error("families_at: n must be >= 1");
  PhaseEvaluator phase(theta);
  std::complex<double> z0 = phyllo_point(phase, n);
  std::complex<double> radial = z0 / std::abs(z0);

  // candidate ceiling must cover intermediate denominators up to q_{j+1},
  // which can dwarf 4 q_j inside a large-coefficient cusp excursion
  long long ceiling = 0;
  {
    auto cf = contfrac::expand(theta, 64);
    auto conv = contfrac::convergents(cf, static_cast<long long>(cf.coefficients.size()) - 1);
    BigInt nn(n);
    for (size_t k = 2; k < conv.size(); ++k) {
      if (conv[k - 1].q * conv[k - 1].q <= nn &&
          (k == conv.size() - 1 || nn < conv[k].q * conv[k].q)) {
        const BigInt& qj = conv[k].q;
        BigInt qj1 = k + 1 < conv.size() ? conv[k + 1].q : qj;
        BigInt cap = BigInt(2) * (qj + qj1);
        ceiling = cap.fits_int64() ? cap.to_int64() : 4 * qj.to_int64();
        break;
      }
    }
    if (ceiling <= 0) ceiling = 4 * static_cast<long long>(std::sqrt(double(n))) + 64;
  }
  std::vector<std::pair<double, long long>> dist;
  for (long long q = 1; q <= ceiling; ++q)
    dist.emplace_back(std::abs(phyllo_point(phase, n + q) - z0), q);
  std::sort(dist.begin(), dist.end());
  std::vector<long long> steps;
  for (const auto& [len, q] : dist) steps.push_back(q);
  if (steps.empty()) throw MeasurementFailure("families_at: no candidate steps");
  auto disp = [&](long long q) { return phyllo_point(phase, n + q) - z0; };

  ParastichyReport rep;
  rep.radius = std::abs(z0);
  rep.primary_step = steps[0];
  std::complex<double> d1 = disp(steps[0]);

  // second family: nearest step not nearly parallel to the primary direction
  const double min_angle = 15.0 * kTwoPi / 360.0;
  long long secondary = 0;
  std::complex<double> d2;
  for (size_t i = 1; i < steps.size(); ++i) {
    std::complex<double> d = disp(steps[i]);
    double a = angle_between(d, d1);
    if (a > min_angle && (kTwoPi / 2.0 - a) > min_angle) {
      secondary = steps[i];
      d2 = d;
      break;
    }
  }
  if (secondary == 0) throw MeasurementFailure("families_at: no independent second family");

  rep.secondary_step = secondary;
  rep.primary_count = rep.primary_step;
  rep.secondary_count = rep.secondary_step;
  rep.primary_chirality = sign_of(d1.real() * radial.imag() - d1.imag() * radial.real());
  rep.secondary_chirality = sign_of(d2.real() * radial.imag() - d2.imag() * radial.real());
  rep.ambiguous = std::abs(std::abs(d2) - std::abs(d1)) < 0.02 * std::abs(d1);
  return rep;
}

std::vector<TransitionEvent> transitions(const RealParam& theta,
                                         std::pair<double, double> t_range) {
  auto [t_min, t_max] = t_range;
  if (!(t_min > 0) || !(t_max > t_min)) throw Error("transitions: bad t range");
  double f = theta.frac();

  auto reduce_at = [&](double t) {
    return hyperbolic::reduce_to_fundamental_domain(hyperbolic::phyllotactic_geodesic(f, t));
  };

  std::vector<TransitionEvent> events;
  const double step = 1.02;  // ~0.02 of hyperbolic arc length per sample
  double t = t_min;
  auto prev = reduce_at(t);
  while (t < t_max) {
    double t2 = std::min(t * step, t_max);
    auto cur = reduce_at(t2);
    if (!(cur.map == prev.map)) {
      // locate each boundary crossing in (t, t2] by bisection on the map
      double lo = t, hi = t2;
      auto lo_red = prev;
      for (int it = 0; it < 80 && (hi - lo) > 1e-13 * hi; ++it) {
        double mid = 0.5 * (lo + hi);
        auto mid_red = reduce_at(mid);
        if (mid_red.map == lo_red.map) {
          lo = mid;
          lo_red = mid_red;
        } else {
          hi = mid;
        }
      }
      TransitionEvent ev;
      ev.t = 0.5 * (lo + hi);
      auto at = reduce_at(lo);
      double circle_gap = std::abs(std::abs(at.point.z()) - 1.0);
      double side_gap = std::abs(std::abs(at.point.x) - 0.5);
      ev.kind = circle_gap < side_gap ? TransitionEvent::Kind::I : TransitionEvent::Kind::II;
      events.push_back(ev);
      // restart just past the event to catch closely spaced crossings
      t = ev.t * (1.0 + 1e-9);
      prev = reduce_at(t);
      continue;
    }
    t = t2;
    prev = cur;
  }
  return events;
}

namespace {

// family steps measured in the linearized lattice at scale t: the transition
// events are located on the reduced geodesic, so the same canonical model
// avoids the smearing of raw point-distance measurements near an event
std::pair<long long, long long> model_families(const RealParam& theta, double t) {
  double sqrt_t = std::sqrt(t);
  auto cf = contfrac::expand(theta, 64);
  auto conv = contfrac::convergents(cf, static_cast<long long>(cf.coefficients.size()) - 1);
  std::vector<long long> denominators;
  for (size_t k = 2; k < conv.size(); ++k) {
    long long idx = conv[k].index;
    long long a_k = cf.coefficients[static_cast<size_t>(idx)];
    for (long long m = 0; m <= a_k; ++m) {
      BigInt q = conv[k - 2].q + BigInt(m) * conv[k - 1].q;
      if (q.is_zero()) continue;
      if (!q.fits_int64() || q.to_int64() > static_cast<long long>(12.0 * sqrt_t) + 8) break;
      denominators.push_back(q.to_int64());
    }
  }
  std::sort(denominators.begin(), denominators.end());
  denominators.erase(std::unique(denominators.begin(), denominators.end()),
                     denominators.end());
  if (denominators.size() < 2)
    throw MeasurementFailure("verify_cab: not enough candidate families");
  auto length = [&](long long q) {
    double f = theta.frac_scaled(q);
    double dist = std::min(f, 1.0 - f);
    double radial = static_cast<double>(q) / (2.0 * sqrt_t);
    double tangential = kTwoPi * sqrt_t * dist;
    return std::hypot(radial, tangential);
  };
  long long best = denominators[0], second = 0;
  for (long long q : denominators)
    if (length(q) < length(best)) best = q;
  for (long long q : denominators) {
    if (q == best) continue;
    if (second == 0 || length(q) < length(second)) second = q;
  }
  return {best, second};
}

}  // namespace

bool verify_cab(const RealParam& theta, const TransitionEvent& event) {
  if (event.kind != TransitionEvent::Kind::II)
    throw Error("verify_cab: event must be type II");
  // bracket by the neighbouring events so the probes stay inside the windows
  auto local = transitions(theta, {event.t / 1.8, event.t * 1.8});
  double below = event.t / 1.3, above = event.t * 1.3;
  for (const auto& ev : local) {
    if (ev.t < event.t * (1.0 - 1e-6)) below = std::max(below, std::sqrt(ev.t * event.t));
    if (ev.t > event.t * (1.0 + 1e-6)) above = std::min(above, std::sqrt(ev.t * event.t));
  }
  auto [a_lo, b] = model_families(theta, below);
  auto [a_hi, c] = model_families(theta, above);
  if (a_lo != a_hi)
    throw MeasurementFailure("verify_cab: primary family changed across the event");
  return c == a_lo + b;
}

MonodromyWalk monodromy_walk(const PhylloSet& set, double loop_radius) {
  if (set.points.empty()) throw LoopBroken("monodromy: empty set");
  double reach = 0.0;
  for (const auto& p : set.points) reach = std::max(reach, p.radius());
  if (reach < loop_radius * 1.15 + 3.0)
    throw LoopBroken("monodromy: set does not extend beyond the loop radius");

  long long n_base = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : set.points) {
    double d = std::hypot(p.x - loop_radius, p.y);
    if (d < best) {
      best = d;
      n_base = p.n;
    }
  }

  PhaseEvaluator phase(set.theta, set.whorl);
  auto pos_of = [&](long long idx) {
    // index layout matches generate/generate_whorled
    if (set.whorl == 1) return phyllo_point(phase, idx);
    long long n = idx / set.whorl, k = idx % set.whorl;
    double fr = phase.frac(n) + static_cast<double>(k) / static_cast<double>(set.whorl);
    double r = std::sqrt(static_cast<double>(n) / static_cast<double>(set.whorl));
    return std::complex<double>(r * std::cos(kTwoPi * fr), r * std::sin(kTwoPi * fr));
  };

  // family steps at the base point, brute force in the set's own indexing so
  // whorled sets walk correctly too
  std::complex<double> base_pos0 = pos_of(n_base);
  long long sigma_max = static_cast<long long>(6.0 * set.whorl * loop_radius) + set.whorl + 4;
  std::vector<std::pair<double, long long>> cand;
  for (long long s = 1; s <= sigma_max && n_base + s <= set.points.back().n; ++s)
    cand.emplace_back(std::abs(pos_of(n_base + s) - base_pos0), s);
  std::sort(cand.begin(), cand.end());
  if (cand.empty()) throw LoopBroken("monodromy: no steps available");
  long long s1 = cand[0].second;
  std::complex<double> d1 = pos_of(n_base + s1) - base_pos0;
  long long s2 = 0;
  const double min_angle = 15.0 * kTwoPi / 360.0;
  for (size_t i = 1; i < cand.size() && s2 == 0; ++i) {
    std::complex<double> d = pos_of(n_base + cand[i].second) - base_pos0;
    double a = angle_between(d, d1);
    if (a <= min_angle || (kTwoPi / 2.0 - a) <= min_angle) continue;
    // require a basis of the full index lattice (whorled sets can tempt the
    // search into an index-2 sublattice)
    double cross = d1.real() * d.imag() - d1.imag() * d.real();
    bool unimodular = true;
    for (size_t j = 1; j < cand.size() && j < 24 && unimodular; ++j) {
      if (cand[j].first > 2.0 * cand[0].first) break;
      std::complex<double> w = pos_of(n_base + cand[j].second) - base_pos0;
      double wa = (w.real() * d.imag() - w.imag() * d.real()) / cross;
      double wb = (d1.real() * w.imag() - d1.imag() * w.real()) / cross;
      std::complex<double> fitted = static_cast<double>(std::llround(wa)) * d1 +
                                    static_cast<double>(std::llround(wb)) * d;
      if (std::abs(w - fitted) > 0.3 * std::min(std::abs(d1), std::abs(d)))
        unimodular = false;
    }
    if (unimodular) s2 = cand[i].second;
  }
  if (s2 == 0) throw LoopBroken("monodromy: no independent second step");

  MonodromyWalk walk;
  walk.base_index = n_base;
  walk.step1 = s1;
  walk.step2 = s2;

  std::complex<double> base_pos = pos_of(n_base);
  std::complex<double> V1_base = pos_of(n_base + s1) - base_pos;
  std::complex<double> V2_base = pos_of(n_base + s2) - base_pos;
  double band = 1.5 * std::max(std::abs(V1_base), std::abs(V2_base)) + 1.5;

  long long cur = n_base;
  std::complex<double> cur_pos = base_pos;
  double ang_acc = 0.0;
  long long c1 = 0, c2 = 0;
  const long long max_index = set.points.back().n;
  long long max_iters =
      static_cast<long long>(64.0 * loop_radius / std::min(std::abs(V1_base), std::abs(V2_base))) + 256;

  struct Move {
    long long dn, dc1, dc2;
  };
  const Move moves[] = {{0, 1, 0},  {0, -1, 0}, {0, 0, 1},  {0, 0, -1},
                        {0, 1, 1},  {0, -1, -1}, {0, 1, -1}, {0, -1, 1}};

  for (long long it = 0; it < max_iters; ++it) {
    // closing condition: nearly full turn and back adjacent to the base point
    if (ang_acc > kTwoPi - 0.5 && std::abs(cur_pos - base_pos) < 2.0 * band) {
      long long dn = n_base - cur;
      bool closed = false;
      for (long long da = -6; da <= 6 && !closed; ++da)
        for (long long db = -6; db <= 6 && !closed; ++db)
          if (da * s1 + db * s2 == dn) {
            c1 += da;
            c2 += db;
            closed = true;
          }
      if (!closed) throw LoopBroken("monodromy: could not close the loop");
      walk.c1 = c1;
      walk.c2 = c2;
      walk.vector = static_cast<double>(c1) * V1_base + static_cast<double>(c2) * V2_base;
      return walk;
    }

    double best_gain = 0.0;
    Move best_move{0, 0, 0};
    long long best_target = -1;
    std::complex<double> best_pos;
    for (const auto& mv : moves) {
      long long target = cur + mv.dc1 * s1 + mv.dc2 * s2;
      if (target < 0 || target > max_index) continue;
      std::complex<double> p = pos_of(target);
      if (std::abs(std::abs(p) - loop_radius) > band) continue;
      double dang = std::arg(p / cur_pos);
      if (dang <= 1e-12) continue;
      // prefer progress per unit radial wobble
      double gain = dang / (1.0 + std::abs(std::abs(p) - loop_radius));
      if (gain > best_gain) {
        best_gain = gain;
        best_move = mv;
        best_target = target;
        best_pos = p;
      }
    }
    if (best_target < 0) throw LoopBroken("monodromy: walk stuck");
    ang_acc += std::arg(best_pos / cur_pos);
    cur = best_target;
    cur_pos = best_pos;
    c1 += best_move.dc1;
    c2 += best_move.dc2;
  }
  throw LoopBroken("monodromy: iteration cap exceeded");
}

std::complex<double> monodromy_vector(const PhylloSet& set, double loop_radius) {
  return monodromy_walk(set, loop_radius).vector;
}

}  // namespace phyllo::parastichy
