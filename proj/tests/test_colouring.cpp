#include "phyllo/colouring.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <set>

#include "doctest.h"
#include "phyllo/errors.hpp"
#include "phyllo/parastichy.hpp"
#include "phyllo/phyllo_set.hpp"

using namespace phyllo;
using namespace phyllo::colouring;

namespace {

struct GoldenFixture {
  PhylloSet set = generate(RealParam::golden(), 2000);
  voronoi::VoronoiDiagram diag = voronoi::compute(set, 42.0);
};

GoldenFixture& fixture() {
  static GoldenFixture fx;
  return fx;
}

// true when the adjacency (u, v) crosses the negative real half-axis
bool crosses_seam(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.imag() * b.imag() > 0) return false;
  if (a.real() > 0 && b.real() > 0) return false;
  return true;
}

int ring_parity_changes(const voronoi::VoronoiDiagram& diag, double r) {
  std::vector<std::pair<double, int>> ring;
  for (const auto& c : diag.cells) {
    if (c.boundary || c.verts.empty() || c.site == 0) continue;
    double lo = 1e300, hi = 0;
    for (const auto& v : c.verts) {
      lo = std::min(lo, std::abs(v));
      hi = std::max(hi, std::abs(v));
    }
    if (lo < r && r < hi)
      ring.emplace_back(std::atan2(c.site_pos.imag(), c.site_pos.real()),
                        static_cast<int>(c.site % 2));
  }
  std::sort(ring.begin(), ring.end());
  int changes = 0;
  for (size_t i = 0; i < ring.size(); ++i)
    if (ring[i].second != ring[(i + 1) % ring.size()].second) ++changes;
  return changes;
}

}  // namespace

TEST_CASE("four_colour is proper away from the seam") {
  auto& fx = fixture();
  auto cm = four_colour(fx.set, fx.diag, {13.0, 16.5});
  CHECK(cm.cell_colour.size() > 80);
  int bad_interior = 0, seam_pairs = 0;
  for (const auto& [id, col] : cm.cell_colour) {
    const auto& cu = fx.diag.cells[static_cast<size_t>(id)];
    for (int nb : cu.neighbors) {
      auto it = cm.cell_colour.find(nb);
      if (it == cm.cell_colour.end()) continue;
      const auto& cv = fx.diag.cells[static_cast<size_t>(nb)];
      if (crosses_seam(cu.site_pos, cv.site_pos)) {
        ++seam_pairs;
        continue;
      }
      if (it->second == col) ++bad_interior;
    }
  }
  CHECK(bad_interior == 0);
  CHECK(seam_pairs >= 2);
}

TEST_CASE("seam crossing exchanges the colours by the monodromy element") {
  auto& fx = fixture();
  auto cm = four_colour(fx.set, fx.diag, {19.0, 23.0});
  REQUIRE(!(cm.monodromy == Colour{0, 0}));
  // local continuation rule: adjacent colours differ by the parity of the
  // rounded lattice step; across the seam the monodromy is added on top
  PhaseEvaluator phase(fx.set.theta);
  auto basis = [&](long long u) {
    auto z = phyllo_point(phase, u);
    return std::pair(phyllo_point(phase, u + cm.step1) - z,
                     phyllo_point(phase, u + cm.step2) - z);
  };
  int seam_checked = 0, plain_checked = 0;
  for (const auto& [id, col] : cm.cell_colour) {
    const auto& cu = fx.diag.cells[static_cast<size_t>(id)];
    for (int nb : cu.neighbors) {
      auto it = cm.cell_colour.find(nb);
      if (it == cm.cell_colour.end()) continue;
      const auto& cv = fx.diag.cells[static_cast<size_t>(nb)];
      auto [v1, v2] = basis(cu.site);
      std::complex<double> disp = cv.site_pos - cu.site_pos;
      double det = v1.real() * v2.imag() - v1.imag() * v2.real();
      long long a = std::llround((disp.real() * v2.imag() - disp.imag() * v2.real()) / det);
      long long b = std::llround((v1.real() * disp.imag() - v1.imag() * disp.real()) / det);
      Colour expect = add(col, Colour{static_cast<int>(((a % 2) + 2) % 2),
                                      static_cast<int>(((b % 2) + 2) % 2)});
      if (crosses_seam(cu.site_pos, cv.site_pos)) {
        CHECK(it->second == add(expect, cm.monodromy));
        ++seam_checked;
      } else {
        CHECK(it->second == expect);
        ++plain_checked;
      }
    }
  }
  CHECK(seam_checked >= 2);
  CHECK(plain_checked > 100);
}

TEST_CASE("tait check passes on seam-free golden annulus regions") {
  auto& fx = fixture();
  int regions = 0;
  for (auto ann : {std::pair{13.0, 16.5}, {19.0, 23.0}, {24.0, 28.5}, {30.5, 36.0}}) {
    auto cm = four_colour(fx.set, fx.diag, ann);
    for (auto angles : {std::pair{-2.6, -0.2}, {0.2, 2.6}}) {
      Region reg{ann.first, ann.second, angles.first, angles.second};
      CHECK(tait_check(fx.diag, cm, reg));
      ++regions;
    }
  }
  CHECK(regions == 8);
}

TEST_CASE("tait check on a hand-coloured generic lattice patch") {
  // generic (non-square) lattice: basis (1, 0), (0.23, 1.07)
  PhylloSet patch;
  patch.theta = RealParam::rational(BigInt(0), BigInt(1));
  const int half = 12;
  long long idx = 0;
  std::vector<Colour> colour_of;
  for (int i = -half; i <= half; ++i)
    for (int j = -half; j <= half; ++j) {
      patch.points.push_back(
          {idx++, i + 0.23 * j, 1.07 * j});
      colour_of.push_back(Colour{((i % 2) + 2) % 2, ((j % 2) + 2) % 2});
    }
  auto diag = voronoi::compute(patch, 9.0);
  ColourMap cm;
  for (size_t i = 0; i < patch.points.size(); ++i)
    cm.cell_colour[static_cast<int>(i)] = colour_of[i];
  Region reg{0.0, 5.0, -3.1, 3.1};
  CHECK(tait_check(diag, cm, reg));

  // every interior hexagon meets the three other colours
  for (size_t i = 0; i < diag.cells.size(); ++i) {
    const auto& c = diag.cells[i];
    if (c.boundary || std::abs(c.site_pos) > 5.0) continue;
    std::set<std::pair<int, int>> seen;
    for (int nb : c.neighbors)
      seen.insert({colour_of[static_cast<size_t>(nb)][0], colour_of[static_cast<size_t>(nb)][1]});
    CHECK(seen.size() == 3);
    CHECK(!seen.count({colour_of[i][0], colour_of[i][1]}));
  }
}

TEST_CASE("square lattice regions are non-generic (degree 4)") {
  PhylloSet patch;
  patch.theta = RealParam::rational(BigInt(0), BigInt(1));
  long long idx = 0;
  for (int i = -10; i <= 10; ++i)
    for (int j = -10; j <= 10; ++j) patch.points.push_back({idx++, double(i), double(j)});
  auto diag = voronoi::compute(patch, 8.0);
  ColourMap cm;  // colours irrelevant: the degree check precedes them
  Region reg{0.0, 4.0, -3.1, 3.1};
  CHECK_THROWS_AS(tait_check(diag, cm, reg), Degree4Vertex);
}

TEST_CASE("region holding the origin cell cannot be Tait-checked") {
  auto& fx = fixture();
  auto cm = four_colour(fx.set, fx.diag, {13.0, 16.5});
  Region reg{0.0, 3.0, -1.0, 1.0};  // no coloured cells here
  CHECK(tait_check(fx.diag, cm, reg) == false);
}

TEST_CASE("black_white parity colouring") {
  auto set = generate(RealParam::golden(), 50);
  auto bw = black_white(set);
  CHECK(!bw.count(0));  // origin excluded
  CHECK(bw.at(1) == Stripe::White);
  CHECK(bw.at(2) == Stripe::Black);
  CHECK(bw.at(33) == Stripe::White);
}

TEST_CASE("stripe counts are even Fibonacci numbers") {
  auto& fx = fixture();
  CHECK(ring_parity_changes(fx.diag, 4.0) == 8);
  CHECK(ring_parity_changes(fx.diag, 10.0) == 34);
  CHECK(ring_parity_changes(fx.diag, 14.0) == 34);
  CHECK(ring_parity_changes(fx.diag, 31.0) == 144);
}

TEST_CASE("monodromy equals the parity signature of the local steps") {
  auto& fx = fixture();
  for (auto ann : {std::pair{13.0, 16.5}, {19.0, 23.0}, {30.5, 36.0}}) {
    Colour mono = monodromy_colour(fx.set, fx.diag, ann);
    auto walk = parastichy::monodromy_walk(fx.set, 0.5 * (ann.first + ann.second));
    Colour expect{static_cast<int>(((walk.c1 % 2) + 2) % 2),
                  static_cast<int>(((walk.c2 % 2) + 2) % 2)};
    CHECK(mono == expect);
  }
  // both steps odd on the (55, 89) annulus: monodromy (1,1)
  Colour m = monodromy_colour(fx.set, fx.diag, {30.5, 36.0});
  CHECK(m == Colour{1, 1});
}

TEST_CASE("black_white is the orbit collapse of four_colour under the monodromy") {
  auto& fx = fixture();
  auto cm = four_colour(fx.set, fx.diag, {19.0, 23.0});
  auto bw = black_white(fx.set);
  // the two monodromy orbits {c, c+m} must coincide with the site parity
  std::map<std::pair<int, int>, int> orbit_to_parity;
  bool consistent = true;
  for (const auto& [id, col] : cm.cell_colour) {
    Colour partner = add(col, cm.monodromy);
    std::pair<int, int> orbit = std::min(std::pair{col[0], col[1]},
                                         std::pair{partner[0], partner[1]});
    long long n = fx.diag.cells[static_cast<size_t>(id)].site;
    int parity = bw.at(n) == Stripe::White ? 1 : 0;
    auto [it, inserted] = orbit_to_parity.emplace(orbit, parity);
    if (!inserted && it->second != parity) consistent = false;
  }
  CHECK(consistent);
  CHECK(orbit_to_parity.size() == 2);
}

TEST_CASE("whorled phyllotaxis of even order has trivial colour monodromy") {
  auto theta = RealParam::golden();
  auto set = generate_whorled(theta, 2, 1300);
  auto diag = voronoi::compute(set, 24.0);
  Colour m = monodromy_colour(set, diag, {13.0, 17.0});
  CHECK(m == Colour{0, 0});
}
