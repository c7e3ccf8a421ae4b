#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "phyllo/hyperbolic.hpp"

namespace phyllo::fitgeo {

/// Observed seed centers (no indices); duplicates are rejected.
struct Observation {
  std::vector<std::complex<double>> points;
  double scale = 1.0;
};

/// Validates and wraps raw points (>= 30 required, duplicates < 1e-9 apart rejected).
Observation make_observation(std::vector<std::complex<double>> pts, double scale = 1.0);

/// Parameters of the best least-squares fit A + C sqrt(n+γ) e^{2iπθn}.
struct FitResult {
  std::complex<double> A{0.0, 0.0};
  std::complex<double> C{1.0, 0.0};
  double theta = 0.0;  // reported as its fractional part in [0, 1)
  double gamma = 0.0;
  double rms_residual = 0.0;
  std::vector<long long> assignment;  // observation k -> model index n (injective)
  bool converged = false;
  int iterations = 0;
};

/// Joint fit over (A, C, θ, γ) and the index assignment: radial-rank
/// initialization, then alternating Levenberg-Marquardt refinement and
/// nearest-model re-assignment. Throws DegenerateData for collinear input.
FitResult fit_sunflower(const Observation& obs,
                        const std::optional<FitResult>& init = std::nullopt);

struct LocalInvariants {
  std::vector<hyperbolic::HPoint> reduced;  // fundamental-domain representatives
  std::vector<double> radii;                // base-point radii, ascending
  long long skipped = 0;                    // points without resolvable pairs
};

/// Modular invariant ±(A-a)/(B-b) of the linearized lattice at each interior
/// point, from the two approximately-opposite nearest-neighbour pairs.
LocalInvariants local_invariants(const Observation& obs);

struct GeodesicFit {
  hyperbolic::GeodesicArc arc;
  double mean_residual = 0.0;  // hyperbolic point-to-arc distances
  double max_residual = 0.0;
  double endpoint_lo = 0.0;  // center - radius
  double endpoint_hi = 0.0;  // center + radius
};

enum class LiftStrategy { ContinuityInRadius };

/// Hyperbolic distance from a point to a geodesic arc.
double arc_distance(const hyperbolic::HPoint& z, const hyperbolic::GeodesicArc& arc);

/// Lifts radius-ordered reduced invariants to a continuous branch, then fits
/// the half-circle minimizing the sum of squared hyperbolic distances
/// (multistart 2-parameter minimizer). Throws LiftAmbiguous when branch
/// continuity fails and Error for fewer than 5 points.
GeodesicFit fit_geodesic(const std::vector<hyperbolic::HPoint>& invariants,
                         LiftStrategy strategy = LiftStrategy::ContinuityInRadius);

}  // namespace phyllo::fitgeo
