#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "phyllo/phyllo_set.hpp"
#include "phyllo/real_param.hpp"

namespace phyllo::parastichy {

/// Primary/secondary parastichy families at one radius. A family with index
/// step q contains q spirals, so counts equal steps.
struct ParastichyReport {
  double radius = 0.0;
  long long primary_step = 0;    // nearest-neighbour index step
  long long secondary_step = 0;  // second independent family
  long long primary_count = 0;
  long long secondary_count = 0;
  int primary_chirality = 0;  // sign of cross(step displacement, radial dir)
  int secondary_chirality = 0;
  bool ambiguous = false;  // within 2% of a type-I swap; both steps reported
};

struct TransitionEvent {
  enum class Kind { I, II };
  Kind kind = Kind::I;
  double t = 0.0;  // index scale; the transition circle has radius sqrt(t)
  [[nodiscard]] double radius() const { return std::sqrt(t); }
};

/// Families at index n from brute-force nearest steps; the secondary family is
/// the closest step whose displacement is not nearly parallel to the primary.
ParastichyReport families_at(const RealParam& theta, long long n);

/// Transition events of the reduced phyllotactic geodesic in t in
/// [t_range.first, t_range.second]: type I when the trace crosses |z| = 1,
/// type II when it crosses |Re z| = 1/2. Sorted by t.
std::vector<TransitionEvent> transitions(const RealParam& theta,
                                         std::pair<double, double> t_range);

/// Checks c = a + b around a type-II event: a = primary count, b = dying
/// secondary, c = newborn secondary. Throws MeasurementFailure when families
/// cannot be resolved on either side.
bool verify_cab(const RealParam& theta, const TransitionEvent& event);

/// Translational monodromy: walks a closed counterclockwise lattice-step loop
/// at the given radius, accumulates the step coefficients, and evaluates the
/// stitched displacement in the base point's step basis. Contract: close to
/// 2π·(-b, a) at base point (a, b).
std::complex<double> monodromy_vector(const PhylloSet& set, double loop_radius);

/// Integer step coefficients accumulated by the monodromy walk (the vector
/// above equals c1·V1 + c2·V2 at the base point); used by the colouring. The
/// steps are (step1, step2) of the local basis.
struct MonodromyWalk {
  long long c1 = 0, c2 = 0;
  long long step1 = 0, step2 = 0;
  std::complex<double> vector;
  long long base_index = 0;
};
MonodromyWalk monodromy_walk(const PhylloSet& set, double loop_radius);

}  // namespace phyllo::parastichy
