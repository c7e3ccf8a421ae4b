#pragma once

#include <vector>

namespace phyllo::geom {

/// Sign of the orientation determinant of (a, b, c): +1 counterclockwise,
/// -1 clockwise, 0 collinear. Double filter with exact expansion-arithmetic
/// fallback; the result is the exact sign.
int orient2d(double ax, double ay, double bx, double by, double cx, double cy);

/// Sign of the incircle determinant: for a counterclockwise triangle (a,b,c),
/// +1 iff d lies strictly inside the circumcircle. Exact.
int incircle(double ax, double ay, double bx, double by, double cx, double cy,
             double dx, double dy);

/// incircle with symbolic perturbation of the lifted paraboloid coordinate
/// (simulation of simplicity): cocircular quadruples are resolved
/// deterministically by the point indices, so the result is never 0 for
/// distinct, non-collinear configurations.
int incircle_sos(const double* xs, const double* ys, int ia, int ib, int ic, int id);

}  // namespace phyllo::geom
