#pragma once

#include <complex>
#include <vector>

namespace phyllo::matching {

struct BottleneckResult {
  double eps = 0.0;
  std::vector<int> pair_of_a;  // matched B index per A point, -1 if unmatched
};

/// Smallest eps admitting an injective pairing a~b with |a-b| <= eps that
/// covers every mandatory A point and every mandatory B point. Pairs beyond
/// eps_cap are never considered; throws MatchingInfeasible when even eps_cap
/// does not admit a covering.
BottleneckResult bottleneck_match(const std::vector<std::complex<double>>& a_pts,
                                  const std::vector<bool>& a_mandatory,
                                  const std::vector<std::complex<double>>& b_pts,
                                  const std::vector<bool>& b_mandatory,
                                  double eps_cap);

}  // namespace phyllo::matching
