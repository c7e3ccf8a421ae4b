#pragma once

#include <complex>
#include <vector>

#include "phyllo/contfrac.hpp"
#include "phyllo/hyperbolic.hpp"
#include "phyllo/real_param.hpp"

namespace phyllo::linearize {

/// Local lattice basis at index n, expressed in the frame rotated by
/// e^{2iπnθ}. v1/v2 are stored with det(v1,v2) > 0; step1/step2 are the
/// index steps realizing them (one of q_{j-1}, q_j).
struct LatticeBasis {
  std::complex<double> v1;
  std::complex<double> v2;
  long long step1 = 0;
  long long step2 = 0;
  int orientation = +1;  // sign of det before normalization, (-1)^j
  [[nodiscard]] double det() const {
    return v1.real() * v2.imag() - v1.imag() * v2.real();
  }
  [[nodiscard]] double shortest() const;
};

/// Second-order error term E_j(a,b) of the linearization, rotated frame.
struct LinearizationError {
  double n = 1;
  double q1 = 0, q2 = 0;          // steps paired with (a, b)
  double delta1 = 0, delta2 = 0;  // δ_{j-1}, δ_j
  [[nodiscard]] std::complex<double> evaluate(double a, double b) const;
};

struct LinearModel {
  long long j = 0;
  long long q_jm1 = 0;
  long long q_j = 0;
  LatticeBasis basis;
  LinearizationError error;
};

/// The unique j with q_{j-1} <= sqrt(n) < q_j. Throws IndexUnavailable when a
/// rational/truncated expansion runs out below sqrt(n).
long long select_j(const RealParam& theta, long long n);

/// Local lattice of φ_θ(N) near index n; |det| = π.
LinearModel linear_model(const RealParam& theta, long long n);

struct TauPoint {
  long long j = 0;
  double t = 0;
  hyperbolic::HPoint value;
};

/// τ_j(t) of the tau family; τ_0 coincides with the phyllotactic geodesic.
TauPoint tau(const RealParam& theta, long long j, double t);

/// Fundamental-domain representative of τ_j(t), computed in extended
/// precision (τ values can hug the real axis, where reduction conditioning
/// eats double precision).
hyperbolic::HPoint tau_reduced(const RealParam& theta, long long j, double t);

/// Smallest ε such that φ_θ(N) and the anchored affine lattice model are
/// ε-close in the disc of radius R about φ_θ(n) (bottleneck matching).
double closeness(const RealParam& theta, long long n, double R, double slack = 1.2);

/// The k index steps q >= 1 minimizing |φ_θ(n+q) - φ_θ(n)|, brute force over
/// q <= 4·q_j; ordered by increasing displacement length.
std::vector<long long> nearest_steps(const RealParam& theta, long long n, int k);

}  // namespace phyllo::linearize
