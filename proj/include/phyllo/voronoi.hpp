#pragma once

#include <array>
#include <complex>
#include <map>
#include <utility>
#include <vector>

#include "phyllo/phyllo_set.hpp"
#include "phyllo/real_param.hpp"

namespace phyllo::voronoi {

struct VoronoiCell {
  long long site = 0;  // seed index of the generating point
  std::complex<double> site_pos;
  std::vector<std::complex<double>> verts;  // ccw vertex loop (circumcenters)
  std::vector<int> neighbors;               // cell ids sharing a Voronoi edge
  bool boundary = true;  // touches the hull or the clip exclusion band
  double area = 0.0;     // shoelace area of the vertex loop
  double clipped_area = 0.0;  // area of loop ∩ clip disc
};

struct VoronoiDiagram {
  double clip_radius = 0.0;
  double boundary_band = 3.0;  // cells with a vertex this close to the rim are flagged
  std::vector<VoronoiCell> cells;  // one per input point, same order
  std::vector<std::pair<int, int>> adjacency;  // cell id pairs sharing an edge
  /// degree-3 Voronoi vertices: position + the three incident cell ids
  std::vector<std::array<int, 3>> vertex_cells;
  std::vector<std::complex<double>> vertex_pos;
};

/// Voronoi diagram via the Delaunay dual (Bowyer-Watson with exact-filtered
/// predicates and index-based symbolic perturbation). Throws DegenerateInput
/// for fewer than 3 points, all-collinear input, or coincident points.
VoronoiDiagram compute(const PhylloSet& points, double clip_radius);

struct AreaStats {
  double mean = 0.0;
  double max_dev = 0.0;
  long long count = 0;
};

/// Mean and max deviation of interior-cell areas for sites in the annulus.
AreaStats cell_area_stats(const VoronoiDiagram& diag, double r_in, double r_out);

struct CellHistogram {
  std::map<int, long long> by_edge_count;  // interior cells, raw edge counts
  long long short_edge_total = 0;
  double short_edge_tol = 0.05;
  std::vector<int> pentagons;  // interior cell ids with 5 edges
  std::vector<int> heptagons;  // interior cell ids with 7 edges
};

CellHistogram classify_cells(const VoronoiDiagram& diag, double short_edge_tol = 0.05);

struct DefectCircles {
  std::vector<double> ts;     // parameters where reduce(γ_θ(t)) hits Re = 0
  std::vector<double> radii;  // sqrt(t)
  bool rational_degenerate = false;  // integral θ: the whole geodesic is the axis
};

/// Interior crossings of the reduced phyllotactic geodesic with the
/// rectangular-lattice locus (imaginary axis of the fundamental domain).
DefectCircles defect_circles(const RealParam& theta, std::pair<double, double> t_range);

struct DefectChainCounts {
  long long pentagons = 0;
  long long heptagons = 0;
  long long dipoles = 0;          // min(pentagons, heptagons)
  long long defect_hexagons = 0;  // chain hexagons with the defect short-edge pattern
  long long family_a = 0;         // smaller parastichy count at the radius
  long long family_b = 0;         // larger parastichy count
};

/// Counts the defect cells met by the circle of the given radius and checks
/// them against the parastichy counts (a dipoles, b-a defect hexagons).
/// Throws CountMismatch when either count is off by more than 1.
DefectChainCounts defect_chain_counts(const VoronoiDiagram& diag, double circle_radius,
                                      const RealParam& theta);

/// Area of the intersection of a simple polygon with the disc |z| <= R.
double polygon_disc_area(const std::vector<std::complex<double>>& poly, double R);

}  // namespace phyllo::voronoi
