#include "phyllo/colouring.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>

#include "phyllo/errors.hpp"

namespace phyllo::colouring {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSectors = 12;

struct Coords {
  long long a = 0, b = 0;
};

struct Stitched {
  std::map<int, Coords> coords;  // cell id -> lattice coordinates (stitched)
  Colour monodromy{0, 0};
  long long s1 = 0, s2 = 0;
};

int sector_of(const std::complex<double>& z) {
  double ang = std::atan2(z.imag(), z.real());  // (-pi, pi], seam at -pi
  int k = static_cast<int>(std::floor((ang + kPi) / (2.0 * kPi / kSectors)));
  return std::clamp(k, 0, kSectors - 1);
}

Stitched stitch(const PhylloSet& set, const voronoi::VoronoiDiagram& diag,
                std::pair<double, double> annulus) {
  auto [r_in, r_out] = annulus;
  if (!(0 < r_in && r_in < r_out)) throw Error("four_colour: bad annulus");
  const auto& pts = set.points;

  // family steps at the annulus midline (brute force on the set itself)
  double r_mid = 0.5 * (r_in + r_out);
  long long base = -1;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    double d = std::hypot(p.x - r_mid, p.y);
    if (d < best) {
      best = d;
      base = p.n;
    }
  }
  auto pos = [&](long long i) {
    const PhylloPoint* p = set.find(i);
    if (!p) throw Error("four_colour: index outside the set");
    return p->pos();
  };
  const long long whorl = set.whorl;
  auto candidates_from = [&](long long b) {
    std::vector<std::pair<double, long long>> cand;
    long long sigma_max = static_cast<long long>(6.0 * whorl * r_mid) + whorl + 4;
    for (long long s = -sigma_max; s <= sigma_max; ++s) {
      if (s == 0 || !set.find(b + s)) continue;
      cand.emplace_back(std::abs(pos(b + s) - pos(b)), s);
    }
    std::sort(cand.begin(), cand.end());
    return cand;
  };
  auto cand = candidates_from(base);
  if (cand.empty()) throw Error("four_colour: no steps available");
  long long s1 = cand[0].second;
  std::complex<double> d1 = pos(base + s1) - pos(base);
  // second step must make (W1, W2) a basis of the full local lattice: every
  // nearby displacement has to land on integer coordinates
  long long s2 = 0;
  std::complex<double> d2;
  for (size_t i = 1; i < cand.size() && s2 == 0; ++i) {
    std::complex<double> d = pos(base + cand[i].second) - pos(base);
    double cross = d1.real() * d.imag() - d1.imag() * d.real();
    if (std::abs(cross) <= 0.25 * std::abs(d1) * std::abs(d)) continue;
    bool unimodular = true;
    for (size_t j = 1; j < cand.size() && j < 48 && unimodular; ++j) {
      if (cand[j].first > 2.0 * cand[0].first) break;
      std::complex<double> w = pos(base + cand[j].second) - pos(base);
      double a = (w.real() * d.imag() - w.imag() * d.real()) / cross;
      double b = (d1.real() * w.imag() - d1.imag() * w.real()) / cross;
      std::complex<double> fitted = static_cast<double>(std::llround(a)) * d1 +
                                    static_cast<double>(std::llround(b)) * d;
      if (std::abs(w - fitted) > 0.3 * std::min(std::abs(d1), std::abs(d)))
        unimodular = false;
    }
    if (unimodular) {
      s2 = cand[i].second;
      d2 = d;
    }
  }
  if (s2 == 0) throw Error("four_colour: no independent second step");

  // in whorled sets the index step realizing a given lattice vector depends on
  // the residue class m mod d; resolve the basis steps per class
  std::vector<long long> s1_of(static_cast<size_t>(whorl)), s2_of(static_cast<size_t>(whorl));
  for (long long rho = 0; rho < whorl; ++rho) {
    long long b_rho = -1;
    double bd = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) {
      if (p.n % whorl != rho) continue;
      double d = std::abs(p.pos() - pos(base));
      if (d < bd) {
        bd = d;
        b_rho = p.n;
      }
    }
    if (b_rho < 0) throw Error("four_colour: missing residue class");
    auto cand_rho = rho == base % whorl ? cand : candidates_from(b_rho);
    long long best1 = 0, best2 = 0;
    double e1 = std::numeric_limits<double>::infinity(), e2 = e1;
    for (const auto& [len, s] : cand_rho) {
      if (len > 2.5 * std::max(std::abs(d1), std::abs(d2))) break;
      std::complex<double> w = pos(b_rho + s) - pos(b_rho);
      double m1 = std::abs(w - d1), m2 = std::abs(w - d2);
      if (m1 < e1) {
        e1 = m1;
        best1 = s;
      }
      if (m2 < e2) {
        e2 = m2;
        best2 = s;
      }
    }
    if (e1 > 0.3 * std::abs(d1) || e2 > 0.3 * std::abs(d2))
      throw Error("four_colour: could not match basis steps across residue classes");
    s1_of[static_cast<size_t>(rho)] = best1;
    s2_of[static_cast<size_t>(rho)] = best2;
  }

  auto steps_ok = [&](long long site) {
    long long rho = site % whorl;
    return set.find(site + s1_of[static_cast<size_t>(rho)]) != nullptr &&
           set.find(site + s2_of[static_cast<size_t>(rho)]) != nullptr;
  };
  auto basis_at = [&](long long u) {
    long long rho = u % whorl;
    std::complex<double> v1 = pos(u + s1_of[static_cast<size_t>(rho)]) - pos(u);
    std::complex<double> v2 = pos(u + s2_of[static_cast<size_t>(rho)]) - pos(u);
    return std::pair<std::complex<double>, std::complex<double>>(v1, v2);
  };
  auto solve_step = [&](long long u, const std::complex<double>& disp, Coords& delta) {
    auto [v1, v2] = basis_at(u);
    double det = v1.real() * v2.imag() - v1.imag() * v2.real();
    double a = (disp.real() * v2.imag() - disp.imag() * v2.real()) / det;
    double b = (v1.real() * disp.imag() - v1.imag() * disp.real()) / det;
    delta.a = std::llround(a);
    delta.b = std::llround(b);
    std::complex<double> fitted = static_cast<double>(delta.a) * v1 +
                                  static_cast<double>(delta.b) * v2;
    double residual = std::abs(disp - fitted);
    double shortest = std::min(std::abs(v1), std::abs(v2));
    if (residual > 0.25 * shortest)
      throw RoundingFailure("four_colour: lattice rounding residual too large");
  };

  // cells of the annulus grouped by sector
  std::vector<std::vector<int>> sector_cells(kSectors);
  for (size_t i = 0; i < diag.cells.size(); ++i) {
    const auto& c = diag.cells[i];
    double r = std::abs(c.site_pos);
    if (c.boundary) continue;
    if (r < r_in || r > r_out) continue;
    if (!steps_ok(c.site)) continue;
    sector_cells[static_cast<size_t>(sector_of(c.site_pos))].push_back(static_cast<int>(i));
  }
  for (int k = 0; k < kSectors; ++k)
    if (sector_cells[static_cast<size_t>(k)].empty())
      throw Error("four_colour: annulus too thin (empty sector)");

  // per-sector BFS from the cell nearest the sector bisector
  Stitched st;
  st.s1 = std::abs(s1);
  st.s2 = std::abs(s2);
  std::vector<std::map<int, Coords>> local(kSectors);
  for (int k = 0; k < kSectors; ++k) {
    double bisect = -kPi + (k + 0.5) * (2.0 * kPi / kSectors);
    std::complex<double> target = std::polar(r_mid, bisect);
    int ref = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int id : sector_cells[static_cast<size_t>(k)]) {
      double d = std::abs(diag.cells[static_cast<size_t>(id)].site_pos - target);
      if (d < bestd) {
        bestd = d;
        ref = id;
      }
    }
    auto& mine = local[static_cast<size_t>(k)];
    std::queue<int> q;
    mine[ref] = Coords{0, 0};
    q.push(ref);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      const auto& cu = diag.cells[static_cast<size_t>(u)];
      for (int v : cu.neighbors) {
        if (mine.count(v)) continue;
        const auto& cv = diag.cells[static_cast<size_t>(v)];
        double rv = std::abs(cv.site_pos);
        if (rv < r_in || rv > r_out) continue;
        if (sector_of(cv.site_pos) != k) continue;
        if (!steps_ok(cv.site)) continue;
        Coords delta;
        solve_step(cu.site, cv.site_pos - cu.site_pos, delta);
        Coords cu_coords = mine[u];
        mine[v] = Coords{cu_coords.a + delta.a, cu_coords.b + delta.b};
        q.push(v);
      }
    }
  }

  // stitch consecutive sectors (ccw), accumulating the coordinate offset
  std::array<Coords, kSectors> offset{};
  offset[0] = Coords{0, 0};
  auto find_bridge = [&](int k, int k2, Coords& delta, int& u_out, int& v_out) {
    for (const auto& [u, cu_coords] : local[static_cast<size_t>(k)]) {
      (void)cu_coords;
      for (int v : diag.cells[static_cast<size_t>(u)].neighbors) {
        if (!local[static_cast<size_t>(k2)].count(v)) continue;
        solve_step(diag.cells[static_cast<size_t>(u)].site,
                   diag.cells[static_cast<size_t>(v)].site_pos -
                       diag.cells[static_cast<size_t>(u)].site_pos,
                   delta);
        u_out = u;
        v_out = v;
        return true;
      }
    }
    return false;
  };
  Coords drift{0, 0};
  for (int k = 0; k < kSectors; ++k) {
    int k2 = (k + 1) % kSectors;
    Coords delta;
    int u = -1, v = -1;
    if (!find_bridge(k, k2, delta, u, v))
      throw Error("four_colour: sectors do not touch (annulus too sparse)");
    // continuity: coords_k(u) + delta == coords_{k2}(v) + offset_{k2->k}
    Coords cu = local[static_cast<size_t>(k)].at(u);
    Coords cv = local[static_cast<size_t>(k2)].at(v);
    Coords step{cu.a + delta.a - cv.a, cu.b + delta.b - cv.b};
    if (k2 != 0) {
      offset[static_cast<size_t>(k2)] = Coords{drift.a + step.a, drift.b + step.b};
      drift = offset[static_cast<size_t>(k2)];
    } else {
      // closing the loop across the seam: the mismatch is the monodromy
      Coords loop{drift.a + step.a, drift.b + step.b};
      st.monodromy = Colour{static_cast<int>(((loop.a % 2) + 2) % 2),
                            static_cast<int>(((loop.b % 2) + 2) % 2)};
    }
  }

  for (int k = 0; k < kSectors; ++k)
    for (const auto& [id, c] : local[static_cast<size_t>(k)])
      st.coords[id] = Coords{c.a + offset[static_cast<size_t>(k)].a,
                             c.b + offset[static_cast<size_t>(k)].b};
  return st;
}

}  // namespace

ColourMap four_colour(const PhylloSet& set, const voronoi::VoronoiDiagram& diag,
                      std::pair<double, double> annulus) {
  Stitched st = stitch(set, diag, annulus);
  ColourMap cm;
  cm.r_in = annulus.first;
  cm.r_out = annulus.second;
  cm.step1 = st.s1;
  cm.step2 = st.s2;
  cm.monodromy = st.monodromy;
  for (const auto& [id, c] : st.coords)
    cm.cell_colour[id] = Colour{static_cast<int>(((c.a % 2) + 2) % 2),
                                static_cast<int>(((c.b % 2) + 2) % 2)};
  return cm;
}

bool tait_check(const voronoi::VoronoiDiagram& diag, const ColourMap& colours,
                const Region& region) {
  bool checked_any = false;
  // coincident Voronoi vertices mean a degree-4 configuration
  std::vector<std::pair<std::complex<double>, size_t>> in_region;
  for (size_t v = 0; v < diag.vertex_pos.size(); ++v) {
    const auto& z = diag.vertex_pos[v];
    double r = std::abs(z);
    double ang = std::atan2(z.imag(), z.real());
    if (r < region.r_in || r > region.r_out) continue;
    if (ang < region.ang_lo || ang > region.ang_hi) continue;
    in_region.emplace_back(z, v);
  }
  for (size_t i = 0; i < in_region.size(); ++i)
    for (size_t j = i + 1; j < in_region.size(); ++j)
      if (std::abs(in_region[i].first - in_region[j].first) < 1e-9)
        throw Degree4Vertex("tait_check: coincident Voronoi vertices in region");

  for (const auto& [z, v] : in_region) {
    const auto& cells = diag.vertex_cells[v];
    Colour c[3];
    bool have_all = true;
    for (int k = 0; k < 3; ++k) {
      auto it = colours.cell_colour.find(cells[static_cast<size_t>(k)]);
      if (it == colours.cell_colour.end()) {
        have_all = false;
        break;
      }
      c[k] = it->second;
    }
    if (!have_all) continue;
    checked_any = true;
    if (c[0] == c[1] || c[1] == c[2] || c[0] == c[2]) return false;
  }
  return checked_any;
}

std::map<long long, Stripe> black_white(const PhylloSet& set) {
  std::map<long long, Stripe> out;
  for (const auto& p : set.points) {
    if (p.n == 0) continue;
    out[p.n] = (p.n % 2 != 0) ? Stripe::White : Stripe::Black;
  }
  return out;
}

Colour monodromy_colour(const PhylloSet& set, const voronoi::VoronoiDiagram& diag,
                        std::pair<double, double> annulus) {
  return stitch(set, diag, annulus).monodromy;
}

}  // namespace phyllo::colouring
