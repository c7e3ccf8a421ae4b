#pragma once

#include <array>
#include <map>
#include <utility>

#include "phyllo/phyllo_set.hpp"
#include "phyllo/voronoi.hpp"

namespace phyllo::colouring {

/// Element of Klein's four-group V = Z/2 x Z/2.
using Colour = std::array<int, 2>;

inline Colour add(Colour a, Colour b) { return {(a[0] + b[0]) & 1, (a[1] + b[1]) & 1}; }

/// Local lattice-coordinate colouring of an annulus, stitched over 12 angular
/// sectors with the seam on the negative real half-axis.
struct ColourMap {
  std::map<int, Colour> cell_colour;  // cell id -> colour
  double r_in = 0.0, r_out = 0.0;
  long long step1 = 0, step2 = 0;  // index steps defining the (a, b) coordinates
  Colour monodromy{0, 0};          // net colour translation around the origin
};

/// Colours each annulus cell by the parity of its lattice coordinates with
/// respect to a per-sector reference site. Throws RoundingFailure when the
/// local lattice model cannot place a neighbour within a quarter basis vector.
ColourMap four_colour(const PhylloSet& set, const voronoi::VoronoiDiagram& diag,
                      std::pair<double, double> annulus);

/// Angular-sector region of an annulus (simply connected when it avoids the
/// seam); angles in radians, measured in (-pi, pi].
struct Region {
  double r_in = 0.0, r_out = 0.0;
  double ang_lo = 0.0, ang_hi = 0.0;
};

/// Checks that every degree-3 Voronoi vertex in the region meets three
/// distinct cell colours (equivalently: the induced edge colouring is Tait).
/// Throws Degree4Vertex if two Voronoi vertices in the region coincide.
bool tait_check(const voronoi::VoronoiDiagram& diag, const ColourMap& colours,
                const Region& region);

enum class Stripe { Black, White };

/// Parity colouring by seed index: odd -> white, even nonzero -> black.
/// The origin (n = 0) is excluded.
std::map<long long, Stripe> black_white(const PhylloSet& set);

/// Net colour translation accumulated around the origin (the seam mismatch of
/// four_colour on the same annulus).
Colour monodromy_colour(const PhylloSet& set, const voronoi::VoronoiDiagram& diag,
                        std::pair<double, double> annulus);

}  // namespace phyllo::colouring
