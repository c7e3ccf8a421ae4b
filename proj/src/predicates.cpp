#include "phyllo/predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace phyllo::geom {

namespace {

// Expansion arithmetic after Shewchuk: a multi-double value is a sum of
// components of increasing magnitude that do not overlap in bits. All
// operations below are exact.

struct TwoD {
  double hi, lo;
};

inline TwoD two_sum(double a, double b) {
  double s = a + b;
  double bv = s - a;
  double err = (a - (s - bv)) + (b - bv);
  return {s, err};
}

inline TwoD two_diff(double a, double b) {
  double s = a - b;
  double bv = a - s;
  double err = (a - (s + bv)) + (bv - b);
  return {s, err};
}

inline TwoD two_prod(double a, double b) {
  double p = a * b;
  double err = std::fma(a, b, -p);
  return {p, err};
}

using Exp = std::vector<double>;

Exp make(TwoD v) {
  Exp e;
  if (v.lo != 0.0) e.push_back(v.lo);
  e.push_back(v.hi);
  return e;
}

// adds a single double to an expansion (grow_expansion, zero-eliminating)
Exp grow(const Exp& e, double b) {
  Exp h;
  h.reserve(e.size() + 1);
  double q = b;
  for (double comp : e) {
    TwoD s = two_sum(q, comp);
    if (s.lo != 0.0) h.push_back(s.lo);
    q = s.hi;
  }
  if (q != 0.0 || h.empty()) h.push_back(q);
  return h;
}

Exp add(const Exp& e, const Exp& f) {
  Exp out = e;
  for (double comp : f) out = grow(out, comp);
  return out;
}

Exp negate(Exp e) {
  for (double& c : e) c = -c;
  return e;
}

// multiplies an expansion by a double (scale_expansion via grow; exact)
Exp scale(const Exp& e, double b) {
  Exp out;
  for (double comp : e) {
    TwoD p = two_prod(comp, b);
    if (p.lo != 0.0) out = grow(out, p.lo);
    if (p.hi != 0.0) out = grow(out, p.hi);
  }
  if (out.empty()) out.push_back(0.0);
  return out;
}

Exp mul(const Exp& e, const Exp& f) {
  Exp out;
  out.push_back(0.0);
  for (double comp : f) out = add(out, scale(e, comp));
  return out;
}

int sign_of(const Exp& e) {
  // components are nonoverlapping and increasing in magnitude
  double top = e.back();
  if (top > 0.0) return 1;
  if (top < 0.0) return -1;
  for (size_t i = e.size(); i-- > 0;) {
    if (e[i] > 0.0) return 1;
    if (e[i] < 0.0) return -1;
  }
  return 0;
}

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
const double kCcwBoundA = (3.0 + 16.0 * kEps) * kEps;
const double kIccBoundA = (10.0 + 96.0 * kEps) * kEps;

int orient2d_exact(double ax, double ay, double bx, double by, double cx, double cy) {
  Exp acx = make(two_diff(ax, cx));
  Exp bcx = make(two_diff(bx, cx));
  Exp acy = make(two_diff(ay, cy));
  Exp bcy = make(two_diff(by, cy));
  Exp det = add(mul(acx, bcy), negate(mul(acy, bcx)));
  return sign_of(det);
}

int incircle_exact(double ax, double ay, double bx, double by, double cx, double cy,
                   double dx, double dy) {
  Exp adx = make(two_diff(ax, dx));
  Exp ady = make(two_diff(ay, dy));
  Exp bdx = make(two_diff(bx, dx));
  Exp bdy = make(two_diff(by, dy));
  Exp cdx = make(two_diff(cx, dx));
  Exp cdy = make(two_diff(cy, dy));

  Exp alift = add(mul(adx, adx), mul(ady, ady));
  Exp blift = add(mul(bdx, bdx), mul(bdy, bdy));
  Exp clift = add(mul(cdx, cdx), mul(cdy, cdy));

  Exp bxcy = add(mul(bdx, cdy), negate(mul(bdy, cdx)));
  Exp cxay = add(mul(cdx, ady), negate(mul(cdy, adx)));
  Exp axby = add(mul(adx, bdy), negate(mul(ady, bdx)));

  Exp det = add(add(mul(alift, bxcy), mul(blift, cxay)), mul(clift, axby));
  return sign_of(det);
}

}  // namespace

int orient2d(double ax, double ay, double bx, double by, double cx, double cy) {
  double detleft = (ax - cx) * (by - cy);
  double detright = (ay - cy) * (bx - cx);
  double det = detleft - detright;
  double detsum;
  if (detleft > 0.0) {
    if (detright <= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = detleft + detright;
  } else if (detleft < 0.0) {
    if (detright >= 0.0) return det > 0 ? 1 : (det < 0 ? -1 : 0);
    detsum = -detleft - detright;
  } else {
    return det > 0 ? 1 : (det < 0 ? -1 : 0);
  }
  double errbound = kCcwBoundA * detsum;
  if (det >= errbound || -det >= errbound) return det > 0 ? 1 : -1;
  return orient2d_exact(ax, ay, bx, by, cx, cy);
}

int incircle(double ax, double ay, double bx, double by, double cx, double cy,
             double dx, double dy) {
  double adx = ax - dx, ady = ay - dy;
  double bdx = bx - dx, bdy = by - dy;
  double cdx = cx - dx, cdy = cy - dy;

  double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  double alift = adx * adx + ady * ady;
  double cdxady = cdx * ady, adxcdy = adx * cdy;
  double blift = bdx * bdx + bdy * bdy;
  double adxbdy = adx * bdy, bdxady = bdx * ady;
  double clift = cdx * cdx + cdy * cdy;

  double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
               clift * (adxbdy - bdxady);
  double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                     (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                     (std::abs(adxbdy) + std::abs(bdxady)) * clift;
  double errbound = kIccBoundA * permanent;
  if (det > errbound || -det > errbound) return det > 0 ? 1 : -1;
  return incircle_exact(ax, ay, bx, by, cx, cy, dx, dy);
}

int incircle_sos(const double* xs, const double* ys, int ia, int ib, int ic, int id) {
  int s = incircle(xs[ia], ys[ia], xs[ib], ys[ib], xs[ic], ys[ic], xs[id], ys[id]);
  if (s != 0) return s;
  // Perturb the lifted coordinate of point i by -eps^(i+1). The determinant
  // gains -eps^(i+1) * C_i where C_i is the cofactor of the lift column; the
  // smallest point index dominates.
  struct Row {
    int pt, row;
  };
  std::array<Row, 4> rows = {Row{ia, 0}, Row{ib, 1}, Row{ic, 2}, Row{id, 3}};
  std::sort(rows.begin(), rows.end(), [](const Row& l, const Row& r) { return l.pt < r.pt; });
  const int order[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
  const int all[4] = {ia, ib, ic, id};
  for (const Row& r : rows) {
    const int* o = order[r.row];
    int minor = orient2d(xs[all[o[0]]], ys[all[o[0]]], xs[all[o[1]]], ys[all[o[1]]],
                         xs[all[o[2]]], ys[all[o[2]]]);
    // cofactor sign: lift column is column 2 of (x, y, lift, 1)
    int cof = ((r.row + 2) % 2 == 0) ? minor : -minor;
    if (cof != 0) return -cof;
  }
  return 0;  // all four collinear; callers never ask this
}

}  // namespace phyllo::geom
