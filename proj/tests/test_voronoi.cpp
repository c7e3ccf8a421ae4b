#include "phyllo/voronoi.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "phyllo/errors.hpp"
#include "phyllo/phyllo_set.hpp"

using namespace phyllo;
using namespace phyllo::voronoi;

namespace {

PhylloSet patch_from(const std::vector<std::complex<double>>& pts) {
  PhylloSet set;
  set.theta = RealParam::rational(BigInt(0), BigInt(1));
  long long n = 0;
  for (const auto& p : pts) set.points.push_back({n++, p.real(), p.imag()});
  return set;
}

PhylloSet square_grid(int half, double a = 1.0) {
  std::vector<std::complex<double>> pts;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) pts.emplace_back(a * i, a * j);
  return patch_from(pts);
}

PhylloSet hex_grid(int half, double a = 1.0) {
  std::vector<std::complex<double>> pts;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j)
      pts.emplace_back(a * (i + 0.5 * j), a * (std::sqrt(3.0) / 2.0 * j));
  return patch_from(pts);
}

}  // namespace

TEST_CASE("degenerate inputs") {
  PhylloSet two = patch_from({{0, 0}, {1, 0}});
  CHECK_THROWS_AS(compute(two, 1.0), DegenerateInput);
  PhylloSet line = patch_from({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  CHECK_THROWS_AS(compute(line, 1.0), DegenerateInput);
  PhylloSet dup = patch_from({{0, 0}, {1, 0}, {1, 0}, {0, 1}});
  CHECK_THROWS_AS(compute(dup, 1.0), DegenerateInput);
}

TEST_CASE("square lattice patch gives unit squares") {
  auto diag = compute(square_grid(10), 8.0);
  long long interior = 0;
  for (const auto& c : diag.cells) {
    if (c.boundary) continue;
    ++interior;
    CHECK(c.area == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(interior > 50);
  // cocircular quadruples split by perturbation merge back to quadrilaterals
  auto hist = classify_cells(diag);
  CHECK(hist.by_edge_count.size() == 1);
  CHECK(hist.by_edge_count.begin()->first == 4);
}

TEST_CASE("hexagonal lattice patch gives regular hexagons") {
  auto diag = compute(hex_grid(12), 8.0);
  double expect = std::sqrt(3.0) / 2.0;  // primitive cell area
  long long interior = 0;
  for (const auto& c : diag.cells) {
    if (c.boundary) continue;
    ++interior;
    CHECK(c.verts.size() == 6);
    CHECK(c.area == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK(interior > 50);
}

TEST_CASE("rectangular lattice patch gives quadrilaterals") {
  std::vector<std::complex<double>> pts;
  for (int i = -12; i <= 12; ++i)
    for (int j = -8; j <= 8; ++j) pts.emplace_back(0.8 * i, 1.3 * j);
  auto diag = compute(patch_from(pts), 6.0);
  auto hist = classify_cells(diag);
  REQUIRE(!hist.by_edge_count.empty());
  CHECK(hist.by_edge_count.size() == 1);
  CHECK(hist.by_edge_count.begin()->first == 4);
}

TEST_CASE("golden diagram: areas, the clip partition and the Delaunay dual") {
  auto set = generate(RealParam::golden(), 1700);
  auto diag = compute(set, 38.0);

  long long interior = 0;
  for (const auto& c : diag.cells)
    if (!c.boundary) {
      ++interior;
      CHECK(c.area > 0.0);
    }
  CHECK(interior > 900);

  SUBCASE("interior mean area approaches pi") {
    auto st = cell_area_stats(diag, 15.0, 30.0);
    CHECK(st.mean == doctest::Approx(M_PI).epsilon(0.01));
  }

  SUBCASE("clipped areas partition the disc") {
    double sum = 0.0;
    for (const auto& c : diag.cells) sum += c.clipped_area;
    double disc = M_PI * 38.0 * 38.0;
    CHECK(std::abs(sum - disc) / disc < 1e-8);
  }

  SUBCASE("every Voronoi vertex is equidistant from its three sites") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<size_t> pick(0, diag.vertex_pos.size() - 1);
    for (int i = 0; i < 300; ++i) {
      size_t v = pick(rng);
      auto z = diag.vertex_pos[v];
      double d0 = std::abs(z - diag.cells[static_cast<size_t>(diag.vertex_cells[v][0])].site_pos);
      double d1 = std::abs(z - diag.cells[static_cast<size_t>(diag.vertex_cells[v][1])].site_pos);
      double d2 = std::abs(z - diag.cells[static_cast<size_t>(diag.vertex_cells[v][2])].site_pos);
      CHECK(std::abs(d1 - d0) < 1e-9 * (1.0 + d0));
      CHECK(std::abs(d2 - d0) < 1e-9 * (1.0 + d0));
    }
  }

  SUBCASE("annulus mean tightens over three nested annuli") {
    auto a1 = cell_area_stats(diag, 8.0, 16.0);
    auto a2 = cell_area_stats(diag, 16.0, 25.0);
    auto a3 = cell_area_stats(diag, 25.0, 34.0);
    CHECK(std::abs(a2.mean - M_PI) <= std::abs(a1.mean - M_PI) + 0.01);
    CHECK(std::abs(a3.mean - M_PI) <= std::abs(a2.mean - M_PI) + 0.01);
  }
}

TEST_CASE("rational theta cell areas approach q tan(pi/q)") {
  SUBCASE("theta = 1/3") {
    auto set = generate(RealParam::parse("1/3"), 2000);
    auto diag = compute(set, 42.0);
    auto st = cell_area_stats(diag, 14.0, 22.0);
    CHECK(st.mean == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(0.02));
  }
  SUBCASE("theta = 2/7") {
    auto set = generate(RealParam::parse("2/7"), 2000);
    auto diag = compute(set, 42.0);
    auto st = cell_area_stats(diag, 14.0, 22.0);
    CHECK(st.mean == doctest::Approx(7.0 * std::tan(M_PI / 7.0)).epsilon(0.02));
  }
}

TEST_CASE("defect circles of the golden ratio") {
  auto dc = defect_circles(RealParam::golden(), {1.0, 12000.0});
  REQUIRE(dc.ts.size() >= 8);
  // interior crossings sit between the heptagon (inner) and pentagon (outer)
  // rings; successive parameters approach the ratio phi^2 = one square-point
  // pass of the closed geodesic (log-spacing ln(phi) in sqrt(t))
  double lnphi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  size_t k = dc.radii.size();
  CHECK(std::log(dc.radii[k - 1] / dc.radii[k - 2]) == doctest::Approx(lnphi).epsilon(0.02));
  CHECK(std::log(dc.radii[k - 2] / dc.radii[k - 3]) == doctest::Approx(lnphi).epsilon(0.02));

  auto degenerate = defect_circles(RealParam::parse("4"), {1.0, 50.0});
  CHECK(degenerate.rational_degenerate);
  CHECK(degenerate.ts.empty());
}

TEST_CASE("defect chain counts match the parastichy rule") {
  auto set = generate(RealParam::golden(), 1700);
  auto diag = compute(set, 38.0);

  // circle between families (13, 21): 13 dipoles and 8 defect hexagons
  auto c1 = defect_chain_counts(diag, 6.9693, RealParam::golden());
  CHECK(c1.pentagons == c1.heptagons);
  CHECK(c1.dipoles == 13);
  CHECK(c1.defect_hexagons == 8);
  CHECK(c1.family_a == 13);
  CHECK(c1.family_b == 21);

  // next circle, families (21, 34): 21 dipoles, 13 defect hexagons
  auto c2 = defect_chain_counts(diag, 11.2724, RealParam::golden());
  CHECK(c2.pentagons == c2.heptagons);
  CHECK(c2.dipoles == 21);
  CHECK(c2.defect_hexagons == 13);

  // Fibonacci: b - a is the previous Fibonacci number
  CHECK(c1.family_b - c1.family_a == 8);
  CHECK(c2.family_b - c2.family_a == 13);
}

TEST_CASE("dipole pairing: pentagons outside, heptagons inside the circle") {
  auto set = generate(RealParam::golden(), 1700);
  auto diag = compute(set, 38.0);
  auto hist = classify_cells(diag);
  double r_circle = 6.9693;
  for (int id : hist.pentagons) {
    double r = std::abs(diag.cells[static_cast<size_t>(id)].site_pos);
    if (r > 5.5 && r < 8.9) CHECK(r > r_circle);
  }
  for (int id : hist.heptagons) {
    double r = std::abs(diag.cells[static_cast<size_t>(id)].site_pos);
    if (r > 5.5 && r < 8.9) CHECK(r < r_circle);
  }
}

TEST_CASE("polygon-disc intersection area") {
  // unit square centered at origin vs large and small discs
  std::vector<std::complex<double>> sq = {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}};
  CHECK(polygon_disc_area(sq, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(polygon_disc_area(sq, 0.25) == doctest::Approx(M_PI * 0.0625).epsilon(1e-12));
  // disc radius 0.5: square minus four corner bites
  double r = 0.5;
  CHECK(polygon_disc_area(sq, r) == doctest::Approx(M_PI * r * r).epsilon(1e-12));
}
