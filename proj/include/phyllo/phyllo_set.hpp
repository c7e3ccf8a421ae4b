#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "phyllo/real_param.hpp"

namespace phyllo {

struct PhylloPoint {
  long long n = 0;  // seed index
  double x = 0.0;
  double y = 0.0;
  [[nodiscard]] std::complex<double> pos() const { return {x, y}; }
  [[nodiscard]] double radius() const { return std::hypot(x, y); }
};

/// φ_θ(N) (whorl = 1) or the d-fold whorled variant; points ordered by index.
/// For whorl d the point with index m = n*d + k is ω_k √(n/d) e^{2iπθn/d};
/// the origin (n = 0) appears once, under index 0.
struct PhylloSet {
  RealParam theta;
  long long whorl = 1;
  std::vector<PhylloPoint> points;

  /// Point with the given seed index, or nullptr (points are index-sorted).
  [[nodiscard]] const PhylloPoint* find(long long idx) const {
    auto it = std::lower_bound(points.begin(), points.end(), idx,
                               [](const PhylloPoint& p, long long v) { return p.n < v; });
    if (it == points.end() || it->n != idx) return nullptr;
    return &*it;
  }
};

/// Evaluates φ_θ(n·/d) phases from a 106-bit representation of {θ/d}, so the
/// angle stays accurate to ~1e-16 absolute for n up to 1e6 and beyond.
class PhaseEvaluator {
 public:
  explicit PhaseEvaluator(const RealParam& theta, long long divisor = 1);
  /// frac(n·θ/divisor) in [0,1)
  [[nodiscard]] double frac(long long n) const;
 private:
  double hi_ = 0.0, lo_ = 0.0;  // {θ/divisor}
};

/// φ_θ(n) for n = 0..n_max.
PhylloSet generate(const RealParam& theta, long long n_max);

/// Whorled variant: d·(n_max+1) points, invariant under rotation by 2π/d.
PhylloSet generate_whorled(const RealParam& theta, long long d, long long n_max);

/// Single point φ_θ(n) evaluated through a PhaseEvaluator.
std::complex<double> phyllo_point(const PhaseEvaluator& phase, long long n);

struct MetricStats {
  double min_gap = 0.0;          // min pairwise distance among |z| <= R
  double covering_radius = 0.0;  // upper bound from grid sampling
  long long disc_count = 0;      // #points with |z| <= R
  double grid_pitch = 0.0;       // sampling pitch used for the covering bound
};

/// Metric statistics of the set inside |z| <= R; the set must extend to
/// radius R + margin (throws InsufficientPoints otherwise).
MetricStats metric_stats(const PhylloSet& set, double R, double margin);

}  // namespace phyllo
