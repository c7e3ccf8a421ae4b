#include "phyllo/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>
#include <queue>

#include "phyllo/errors.hpp"
#include "phyllo/hyperbolic.hpp"
#include "phyllo/parastichy.hpp"
#include "phyllo/predicates.hpp"

namespace phyllo::voronoi {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Tri {
  std::array<int, 3> v;   // ccw
  std::array<int, 3> nb;  // nb[k] across the edge opposite v[k], -1 if none
};

class Delaunay {
 public:
  std::vector<double> xs, ys;  // real points then 3 super vertices
  int n_real = 0;
  std::vector<Tri> tris;
  std::vector<bool> alive;

  explicit Delaunay(const std::vector<std::complex<double>>& pts) {
    n_real = static_cast<int>(pts.size());
    xs.reserve(pts.size() + 3);
    ys.reserve(pts.size() + 3);
    double m = 1.0;
    for (const auto& p : pts) {
      xs.push_back(p.real());
      ys.push_back(p.imag());
      m = std::max({m, std::abs(p.real()), std::abs(p.imag())});
    }
    double big = 64.0 * m + 1.0;
    // super triangle strictly containing every point
    xs.push_back(-4.0 * big);
    ys.push_back(-3.0 * big);
    xs.push_back(4.0 * big);
    ys.push_back(-3.0 * big);
    xs.push_back(0.0);
    ys.push_back(5.0 * big);
    tris.push_back({{n_real, n_real + 1, n_real + 2}, {-1, -1, -1}});
    alive.push_back(true);
  }

  [[nodiscard]] bool is_super(int v) const { return v >= n_real; }

  int locate(int ip, int hint) const {
    int t = hint;
    if (t < 0 || t >= static_cast<int>(tris.size()) || !alive[static_cast<size_t>(t)])
      t = first_alive();
    size_t guard = tris.size() * 4 + 64;
    while (guard--) {
      bool moved = false;
      const Tri& tr = tris[static_cast<size_t>(t)];
      for (int k = 0; k < 3; ++k) {
        int a = tr.v[static_cast<size_t>((k + 1) % 3)];
        int b = tr.v[static_cast<size_t>((k + 2) % 3)];
        if (geom::orient2d(xs[static_cast<size_t>(a)], ys[static_cast<size_t>(a)],
                           xs[static_cast<size_t>(b)], ys[static_cast<size_t>(b)],
                           xs[static_cast<size_t>(ip)], ys[static_cast<size_t>(ip)]) < 0) {
          int next = tr.nb[static_cast<size_t>(k)];
          if (next < 0) throw Error("delaunay: walked out of the super triangle");
          t = next;
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    // degenerate walk; fall back to a scan
    for (size_t i = 0; i < tris.size(); ++i) {
      if (!alive[i]) continue;
      bool inside = true;
      for (int k = 0; k < 3 && inside; ++k) {
        int a = tris[i].v[static_cast<size_t>((k + 1) % 3)];
        int b = tris[i].v[static_cast<size_t>((k + 2) % 3)];
        if (geom::orient2d(xs[static_cast<size_t>(a)], ys[static_cast<size_t>(a)],
                           xs[static_cast<size_t>(b)], ys[static_cast<size_t>(b)],
                           xs[static_cast<size_t>(ip)], ys[static_cast<size_t>(ip)]) < 0)
          inside = false;
      }
      if (inside) return static_cast<int>(i);
    }
    throw Error("delaunay: point location failed");
  }

  int insert(int ip, int hint) {
    int t0 = locate(ip, hint);
    // cavity of triangles whose (perturbed) circumcircle contains ip
    std::vector<int> cavity;
    std::vector<char> in_cavity(tris.size(), 0);
    std::queue<int> q;
    q.push(t0);
    in_cavity[static_cast<size_t>(t0)] = 1;
    while (!q.empty()) {
      int t = q.front();
      q.pop();
      cavity.push_back(t);
      for (int k = 0; k < 3; ++k) {
        int o = tris[static_cast<size_t>(t)].nb[static_cast<size_t>(k)];
        if (o < 0 || in_cavity[static_cast<size_t>(o)]) continue;
        const Tri& ot = tris[static_cast<size_t>(o)];
        if (geom::incircle_sos(xs.data(), ys.data(), ot.v[0], ot.v[1], ot.v[2], ip) > 0) {
          in_cavity[static_cast<size_t>(o)] = 1;
          q.push(o);
        }
      }
    }
    // boundary edges (u -> v ccw around the cavity) with their outer triangle
    struct BEdge {
      int u, v, outer;
    };
    std::vector<BEdge> boundary;
    for (int t : cavity) {
      const Tri& tr = tris[static_cast<size_t>(t)];
      for (int k = 0; k < 3; ++k) {
        int o = tr.nb[static_cast<size_t>(k)];
        if (o >= 0 && in_cavity[static_cast<size_t>(o)]) continue;
        boundary.push_back({tr.v[static_cast<size_t>((k + 1) % 3)],
                            tr.v[static_cast<size_t>((k + 2) % 3)], o});
      }
    }
    for (int t : cavity) alive[static_cast<size_t>(t)] = false;

    // fan: one triangle (u, v, ip) per boundary edge
    std::map<int, int> tri_from_u, tri_from_v;
    std::vector<int> created;
    for (const BEdge& e : boundary) {
      Tri nt;
      nt.v = {e.u, e.v, ip};
      nt.nb = {-1, -1, -1};
      nt.nb[2] = e.outer;  // across (u, v), opposite ip
      int id = static_cast<int>(tris.size());
      tris.push_back(nt);
      alive.push_back(true);
      in_cavity.push_back(0);
      tri_from_u[e.u] = id;
      tri_from_v[e.v] = id;
      created.push_back(id);
      if (e.outer >= 0) {
        Tri& ot = tris[static_cast<size_t>(e.outer)];
        for (int k = 0; k < 3; ++k) {
          int a = ot.v[static_cast<size_t>((k + 1) % 3)];
          int b = ot.v[static_cast<size_t>((k + 2) % 3)];
          if (a == e.v && b == e.u) ot.nb[static_cast<size_t>(k)] = id;
        }
      }
    }
    for (int id : created) {
      Tri& tr = tris[static_cast<size_t>(id)];
      int u = tr.v[0], v = tr.v[1];
      tr.nb[0] = tri_from_u.at(v);  // across (v, ip)
      tr.nb[1] = tri_from_v.at(u);  // across (ip, u)
    }
    return created.empty() ? t0 : created.back();
  }

 private:
  [[nodiscard]] int first_alive() const {
    for (size_t i = alive.size(); i-- > 0;)
      if (alive[i]) return static_cast<int>(i);
    throw Error("delaunay: no triangles");
  }
};

std::complex<double> circumcenter(double ax, double ay, double bx, double by, double cx,
                                  double cy) {
  double abx = bx - ax, aby = by - ay;
  double acx = cx - ax, acy = cy - ay;
  double d = 2.0 * (abx * acy - aby * acx);
  double ab2 = abx * abx + aby * aby;
  double ac2 = acx * acx + acy * acy;
  double ux = (acy * ab2 - aby * ac2) / d;
  double uy = (abx * ac2 - acx * ab2) / d;
  return {ax + ux, ay + uy};
}

double shoelace(const std::vector<std::complex<double>>& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % poly.size()];
    s += p.real() * q.imag() - q.real() * p.imag();
  }
  return 0.5 * s;
}

}  // namespace

double polygon_disc_area(const std::vector<std::complex<double>>& poly, double R) {
  // signed contribution of each directed edge against the disc centered at 0
  auto sector = [&](const std::complex<double>& p, const std::complex<double>& q) {
    double dth = std::remainder(std::arg(q) - std::arg(p), 2.0 * kPi);
    return 0.5 * R * R * dth;
  };
  auto triangle = [](const std::complex<double>& p, const std::complex<double>& q) {
    return 0.5 * (p.real() * q.imag() - q.real() * p.imag());
  };
  double area = 0.0;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    std::complex<double> a = poly[i], b = poly[(i + 1) % n];
    bool ain = std::norm(a) <= R * R, bin = std::norm(b) <= R * R;
    if (ain && bin) {
      area += triangle(a, b);
      continue;
    }
    // intersections of the segment with the circle
    std::complex<double> d = b - a;
    double A = std::norm(d);
    double B = 2.0 * (a.real() * d.real() + a.imag() * d.imag());
    double C = std::norm(a) - R * R;
    double disc = B * B - 4.0 * A * C;
    if (disc <= 0.0) {
      area += sector(a, b);
      continue;
    }
    double sq = std::sqrt(disc);
    double t1 = (-B - sq) / (2.0 * A), t2 = (-B + sq) / (2.0 * A);
    std::complex<double> p1 = a + t1 * d, p2 = a + t2 * d;
    if (ain && !bin) {
      area += triangle(a, p2) + sector(p2, b);
    } else if (!ain && bin) {
      area += sector(a, p1) + triangle(p1, b);
    } else {
      if (t1 > 0.0 && t2 < 1.0 && t1 < t2) {
        area += sector(a, p1) + triangle(p1, p2) + sector(p2, b);
      } else {
        area += sector(a, b);
      }
    }
  }
  return area;
}

VoronoiDiagram compute(const PhylloSet& points, double clip_radius) {
  const auto& pts = points.points;
  if (pts.size() < 3) throw DegenerateInput("voronoi: need at least 3 points");

  std::vector<std::complex<double>> coords;
  coords.reserve(pts.size());
  for (const auto& p : pts) coords.push_back(p.pos());

  // duplicate detection on a sorted copy
  {
    std::vector<std::complex<double>> sorted = coords;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (size_t i = 1; i < sorted.size(); ++i)
      if (sorted[i] == sorted[i - 1])
        throw DegenerateInput("voronoi: coincident points");
  }

  // collinearity check
  {
    bool collinear = true;
    for (size_t i = 2; i < coords.size() && collinear; ++i)
      if (geom::orient2d(coords[0].real(), coords[0].imag(), coords[1].real(),
                         coords[1].imag(), coords[i].real(), coords[i].imag()) != 0)
        collinear = false;
    if (collinear) throw DegenerateInput("voronoi: all points collinear");
  }

  Delaunay dt(coords);

  // spatially coherent insertion order: serpentine sweep over row bands
  std::vector<int> order(coords.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  double band = std::max(1.0, 4.0 * clip_radius / std::sqrt(static_cast<double>(coords.size()) + 1.0));
  std::vector<std::tuple<int, double, double>> keys(coords.size());
  for (size_t i = 0; i < coords.size(); ++i) {
    int gy = static_cast<int>(std::floor(coords[i].imag() / band));
    double x = coords[i].real();
    keys[i] = {gy, (gy & 1) ? -x : x, coords[i].imag()};
  }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return keys[static_cast<size_t>(a)] < keys[static_cast<size_t>(b)]; });
  int hint = 0;
  for (int ip : order) hint = dt.insert(ip, hint);

  VoronoiDiagram diag;
  diag.clip_radius = clip_radius;

  // circumcenters of alive triangles; vertex records for real-site triangles
  std::vector<std::complex<double>> centers(dt.tris.size());
  std::vector<int> incident(coords.size(), -1);
  std::vector<int> vert_id(dt.tris.size(), -1);
  for (size_t t = 0; t < dt.tris.size(); ++t) {
    if (!dt.alive[t]) continue;
    const Tri& tr = dt.tris[t];
    centers[t] = circumcenter(dt.xs[static_cast<size_t>(tr.v[0])], dt.ys[static_cast<size_t>(tr.v[0])],
                              dt.xs[static_cast<size_t>(tr.v[1])], dt.ys[static_cast<size_t>(tr.v[1])],
                              dt.xs[static_cast<size_t>(tr.v[2])], dt.ys[static_cast<size_t>(tr.v[2])]);
    bool real_tri = true;
    for (int k = 0; k < 3; ++k) {
      if (dt.is_super(tr.v[static_cast<size_t>(k)]))
        real_tri = false;
      else if (incident[static_cast<size_t>(tr.v[static_cast<size_t>(k)])] < 0)
        incident[static_cast<size_t>(tr.v[static_cast<size_t>(k)])] = static_cast<int>(t);
    }
    if (real_tri) {
      vert_id[t] = static_cast<int>(diag.vertex_pos.size());
      diag.vertex_pos.push_back(centers[t]);
      diag.vertex_cells.push_back({tr.v[0], tr.v[1], tr.v[2]});
    }
  }

  diag.cells.resize(coords.size());
  std::vector<std::pair<int, int>> adj;
  for (size_t i = 0; i < coords.size(); ++i) {
    VoronoiCell& cell_out = diag.cells[i];
    cell_out.site = pts[i].n;
    cell_out.site_pos = coords[i];
    int t0 = incident[i];
    if (t0 < 0) continue;  // isolated (cannot happen)
    // rotate counterclockwise around the site
    int t = t0;
    bool open = false;
    std::vector<int> fan;
    for (long long guard = static_cast<long long>(dt.tris.size()) + 8;; --guard) {
      if (guard <= 0) throw Error("voronoi: fan did not close");
      fan.push_back(t);
      const Tri& tr = dt.tris[static_cast<size_t>(t)];
      int k = -1;
      for (int j = 0; j < 3; ++j)
        if (tr.v[static_cast<size_t>(j)] == static_cast<int>(i)) k = j;
      if (k < 0) throw Error("voronoi: fan lost its site");
      int nxt = tr.nb[static_cast<size_t>((k + 1) % 3)];
      if (nxt < 0) {
        open = true;
        break;
      }
      t = nxt;
      if (t == t0) break;
    }

    bool touches_super = false;
    cell_out.verts.clear();
    cell_out.neighbors.clear();
    for (int ft : fan) {
      const Tri& tr = dt.tris[static_cast<size_t>(ft)];
      cell_out.verts.push_back(centers[static_cast<size_t>(ft)]);
      int k = -1;
      for (int j = 0; j < 3; ++j)
        if (tr.v[static_cast<size_t>(j)] == static_cast<int>(i)) k = j;
      int other = tr.v[static_cast<size_t>((k + 2) % 3)];
      if (dt.is_super(other))
        touches_super = true;
      else {
        cell_out.neighbors.push_back(other);
        if (static_cast<int>(i) < other) adj.emplace_back(static_cast<int>(i), other);
      }
      for (int j = 0; j < 3; ++j)
        if (dt.is_super(tr.v[static_cast<size_t>(j)])) touches_super = true;
    }
    double rim = clip_radius - diag.boundary_band;
    bool near_rim = std::abs(cell_out.site_pos) > rim;
    for (const auto& v : cell_out.verts)
      if (std::abs(v) > rim) near_rim = true;
    cell_out.boundary = open || touches_super || near_rim;
    cell_out.area = shoelace(cell_out.verts);
    cell_out.clipped_area = polygon_disc_area(cell_out.verts, clip_radius);
  }
  diag.adjacency = std::move(adj);
  return diag;
}

AreaStats cell_area_stats(const VoronoiDiagram& diag, double r_in, double r_out) {
  AreaStats st;
  double sum = 0.0;
  std::vector<double> areas;
  for (const auto& c : diag.cells) {
    if (c.boundary) continue;
    double r = std::abs(c.site_pos);
    if (r < r_in || r > r_out) continue;
    areas.push_back(c.area);
    sum += c.area;
  }
  if (areas.empty()) throw EmptyAnnulus("cell_area_stats: no interior cells in annulus");
  st.count = static_cast<long long>(areas.size());
  st.mean = sum / static_cast<double>(areas.size());
  for (double a : areas) st.max_dev = std::max(st.max_dev, std::abs(a - st.mean));
  return st;
}

namespace {

// edges below this length are artifacts of symbolic perturbation splitting an
// exactly-cocircular quadruple; they are merged away for classification
constexpr double kMergeEps = 1e-9;

int geometric_edge_count(const VoronoiCell& c) {
  int edges = 0;
  for (size_t k = 0; k < c.verts.size(); ++k)
    if (std::abs(c.verts[(k + 1) % c.verts.size()] - c.verts[k]) >= kMergeEps) ++edges;
  return edges;
}

}  // namespace

CellHistogram classify_cells(const VoronoiDiagram& diag, double short_edge_tol) {
  CellHistogram h;
  h.short_edge_tol = short_edge_tol;
  for (size_t i = 0; i < diag.cells.size(); ++i) {
    const auto& c = diag.cells[i];
    if (c.boundary) continue;
    int edges = geometric_edge_count(c);
    ++h.by_edge_count[edges];
    for (size_t k = 0; k < c.verts.size(); ++k) {
      double len = std::abs(c.verts[(k + 1) % c.verts.size()] - c.verts[k]);
      if (len >= kMergeEps && len < short_edge_tol) ++h.short_edge_total;
    }
    if (edges == 5) h.pentagons.push_back(static_cast<int>(i));
    if (edges == 7) h.heptagons.push_back(static_cast<int>(i));
  }
  return h;
}

DefectCircles defect_circles(const RealParam& theta, std::pair<double, double> t_range) {
  auto [t_min, t_max] = t_range;
  if (!(t_min > 0) || !(t_max > t_min)) throw Error("defect_circles: bad t range");
  DefectCircles out;
  double f = theta.frac();
  if (f == 0.0) {
    out.rational_degenerate = true;  // the whole geodesic lies on the axis
    return out;
  }
  auto reduce_at = [&](double t) {
    return hyperbolic::reduce_to_fundamental_domain(hyperbolic::phyllotactic_geodesic(f, t));
  };

  // interior axis crossings can hide exponentially close to the corner i, so
  // windows containing reduction jumps are subdivided until either a same-map
  // sign change is isolated (bisect it) or the window is resolution-limited
  auto record = [&](double t_star) {
    auto at = reduce_at(t_star);
    if (std::abs(at.point.x) < 1e-6 && std::norm(at.point.z()) >= 1.0 - 1e-9) {
      out.ts.push_back(t_star);
      out.radii.push_back(std::sqrt(t_star));
    }
  };
  using Red = hyperbolic::ReduceResult;
  auto bisect_same_map = [&](double lo, double hi, const Red& lo_red) {
    bool lo_neg = lo_red.point.x < 0;
    for (int it = 0; it < 80 && (hi - lo) > 1e-15 * hi; ++it) {
      double mid = 0.5 * (lo + hi);
      auto mr = reduce_at(mid);
      if ((mr.point.x < 0) == lo_neg)
        lo = mid;
      else
        hi = mid;
    }
    record(0.5 * (lo + hi));
  };
  std::function<void(double, const Red&, double, const Red&, int)> scan =
      [&](double t1, const Red& r1, double t2, const Red& r2, int depth) {
        bool sign_change = (r1.point.x < 0) != (r2.point.x < 0);
        bool same_map = r1.map == r2.map;
        if (same_map) {
          if (sign_change) bisect_same_map(t1, t2, r1);
          return;
        }
        if (depth > 60 || (t2 - t1) <= 4e-14 * t2) return;  // bare jump: circle crossing
        double mid = 0.5 * (t1 + t2);
        auto rm = reduce_at(mid);
        scan(t1, r1, mid, rm, depth + 1);
        scan(mid, rm, t2, r2, depth + 1);
      };

  const double step = 1.01;
  double t = t_min;
  auto prev = reduce_at(t);
  while (t < t_max) {
    double t2 = std::min(t * step, t_max);
    auto cur = reduce_at(t2);
    scan(t, prev, t2, cur, 0);
    t = t2;
    prev = cur;
  }
  std::sort(out.ts.begin(), out.ts.end());
  std::sort(out.radii.begin(), out.radii.end());
  return out;
}

DefectChainCounts defect_chain_counts(const VoronoiDiagram& diag, double circle_radius,
                                      const RealParam& theta) {
  if (circle_radius + diag.boundary_band >= diag.clip_radius)
    throw Error("defect_chain_counts: circle not interior to the diagram");
  DefectChainCounts out;
  // pentagon/heptagon rings flank the circle within a factor ~sqrt(phi) band;
  // the connector hexagons are the ones the circle itself passes through
  double band_lo = circle_radius / 1.25, band_hi = circle_radius * 1.25;
  for (const auto& c : diag.cells) {
    if (c.boundary || c.verts.empty()) continue;
    int edges = geometric_edge_count(c);
    double site_r = std::abs(c.site_pos);
    if (edges == 5 && site_r > band_lo && site_r < band_hi) ++out.pentagons;
    if (edges == 7 && site_r > band_lo && site_r < band_hi) ++out.heptagons;
    if (edges == 6) {
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (const auto& v : c.verts) {
        lo = std::min(lo, std::abs(v));
        hi = std::max(hi, std::abs(v));
      }
      if (lo < circle_radius && circle_radius < hi) ++out.defect_hexagons;
    }
  }
  out.dipoles = std::min(out.pentagons, out.heptagons);

  auto fam = parastichy::families_at(
      theta, std::max<long long>(1, std::llround(circle_radius * circle_radius)));
  out.family_a = std::min(fam.primary_count, fam.secondary_count);
  out.family_b = std::max(fam.primary_count, fam.secondary_count);

  if (std::abs(out.pentagons - out.heptagons) > 1 ||
      std::abs(out.dipoles - out.family_a) > 1 ||
      std::abs(out.defect_hexagons - (out.family_b - out.family_a)) > 1)
    throw CountMismatch("defect_chain_counts: counts disagree with parastichy families");
  return out;
}

}  // namespace phyllo::voronoi
