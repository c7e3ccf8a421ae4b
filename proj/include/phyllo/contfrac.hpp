#pragma once

#include <vector>

#include "phyllo/real_param.hpp"

namespace phyllo::contfrac {

/// Coefficients a_0; a_1, a_2, ... of θ. For exact variants the expansion is
/// exact (rationals terminate, surds are eventually periodic); Float
/// expansions stop once coefficients become numerically meaningless.
struct ContinuedFraction {
  std::vector<long long> coefficients;
  bool exact = false;
  bool terminated = false;   // rational θ: the expansion genuinely ends
  long long period_start = -1;  // surds: first index of the detected cycle
  long long period_length = 0;
  /// θ_i for i = 0..coefficients.size(), exact variants only.
  std::vector<RealParam> tail_values;
};

struct Convergent {
  BigInt p;
  BigInt q;
  long long index = -2;  // (p_{-2},q_{-2}) = (0,1), (p_{-1},q_{-1}) = (1,0)
};

struct Tail {
  RealParam value;
  long long index = 0;
};

struct IdentityReport {
  long long n_max = 0;
  long long checks = 0;
  double max_residual = 0.0;
  bool determinant_exact = true;
};

/// Expands θ via a_i = ⌊θ_i⌋, θ_{i+1} = 1/{θ_i}. Rationals use the unique
/// expansion whose last coefficient is >= 2 (the floor algorithm yields it).
ContinuedFraction expand(const RealParam& theta, long long max_terms);

/// Convergents p_n/q_n for n = -2 .. n_max (requires n_max < #coefficients).
std::vector<Convergent> convergents(const ContinuedFraction& cf, long long n_max);

/// (p_{n-2} + k p_{n-1}, q_{n-2} + k q_{n-1}) for k = 0..a_n - 1.
std::vector<Convergent> intermediate_convergents(const ContinuedFraction& cf, long long n);

/// θ_n = [a_n; a_{n+1}, ...]; exact for exact θ. Throws TailUndefined when a
/// rational expansion terminates before n.
Tail tail(const RealParam& theta, long long n);

/// θ_n as a double from an existing expansion (backward evaluation for Float).
double tail_double(const ContinuedFraction& cf, long long n);

/// Checks the determinant identity exactly and the tail/convergent identities
/// numerically for all n <= n_max; returns the max absolute residual.
/// Throws IdentityViolation if the exact determinant identity fails.
IdentityReport verify_identities(const RealParam& theta, long long n_max);

}  // namespace phyllo::contfrac
