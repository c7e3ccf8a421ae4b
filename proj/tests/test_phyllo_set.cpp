#include "phyllo/phyllo_set.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "phyllo/errors.hpp"

namespace {
bool set_has_unique_indices(const phyllo::PhylloSet& s) {
  for (size_t i = 1; i < s.points.size(); ++i)
    if (s.points[i].n <= s.points[i - 1].n) return false;
  return true;
}
}  // namespace

using namespace phyllo;

TEST_CASE("generate basics") {
  auto set = generate(RealParam::golden(), 400);
  REQUIRE(set.points.size() == 401);
  CHECK(set.points[0].x == 0.0);
  CHECK(set.points[0].y == 0.0);
  for (const auto& p : set.points) {
    double r = p.radius();
    double expect = std::sqrt(static_cast<double>(p.n));
    if (p.n > 0) CHECK(r == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("golden disc of radius 20 holds 400 points (plus the origin)") {
  auto set = generate(RealParam::golden(), 500);
  long long count = 0;
  for (const auto& p : set.points)
    if (p.radius() <= 20.0) ++count;
  // n = 0..400 all satisfy sqrt(n) <= 20
  CHECK(count == 401);
}

TEST_CASE("phase equals 2*pi*frac(n*theta) for exact theta out to n = 1e6") {
  auto theta = RealParam::golden();
  PhaseEvaluator phase(theta);
  for (long long n : {1ll, 17ll, 4181ll, 832040ll, 1000000ll}) {
    double expect = theta.frac_scaled(n);  // exact BigInt reduction
    CHECK(phase.frac(n) == doctest::Approx(expect).epsilon(1e-10));
  }
  // independent long double cross-check at moderate n
  long double g = (1.0L + std::sqrt(5.0L)) / 2.0L;
  for (long long n : {12ll, 345ll, 6789ll}) {
    long double v = g * n;
    CHECK(phase.frac(n) == doctest::Approx(static_cast<double>(v - std::floor(v)))
                               .epsilon(1e-10));
  }
}

TEST_CASE("whorled sets") {
  auto theta = RealParam::golden();
  SUBCASE("d = 1 reproduces generate") {
    auto plain = generate(theta, 50);
    auto w1 = generate_whorled(theta, 1, 50);
    REQUIRE(plain.points.size() == w1.points.size());
    CHECK(set_has_unique_indices(w1));
    for (size_t i = 0; i < plain.points.size(); ++i) {
      CHECK(plain.points[i].x == doctest::Approx(w1.points[i].x).epsilon(1e-14));
      CHECK(plain.points[i].y == doctest::Approx(w1.points[i].y).epsilon(1e-14));
    }
  }
  SUBCASE("d = 2 set is invariant under z -> -z") {
    auto set = generate_whorled(theta, 2, 100);
    CHECK(set.points.size() == 201);  // 2*(n_max+1) minus the merged origin
    for (size_t i = 1; i + 1 < set.points.size(); i += 2) {
      CHECK(set.points[i].x == doctest::Approx(-set.points[i + 1].x).epsilon(1e-12));
      CHECK(set.points[i].y == doctest::Approx(-set.points[i + 1].y).epsilon(1e-12));
    }
  }
  SUBCASE("whorl-d set is the union of d rotated copies of the rescaled base") {
    const long long d = 3, n_max = 60;
    auto set = generate_whorled(theta, d, n_max);
    PhaseEvaluator phase(theta, d);
    for (const auto& p : set.points) {
      if (p.n == 0) continue;
      long long n = p.n / d, k = p.n % d;
      double ang = 2.0 * M_PI * (phase.frac(n) + static_cast<double>(k) / d);
      double r = std::sqrt(static_cast<double>(n) / d);
      CHECK(p.x == doctest::Approx(r * std::cos(ang)).epsilon(1e-12));
      CHECK(p.y == doctest::Approx(r * std::sin(ang)).epsilon(1e-12));
    }
  }
}

TEST_CASE("metric stats") {
  SUBCASE("golden disc counts and gaps") {
    auto set = generate(RealParam::golden(), 520);
    auto stats = metric_stats(set, 20.0, 2.0);
    CHECK(stats.disc_count == 401);
    CHECK(stats.min_gap > 0.4);
    CHECK(stats.covering_radius < 2.5);
  }
  SUBCASE("rational theta is never uniformly discrete") {
    auto set = generate(RealParam::parse("1/4"), 520);
    auto stats = metric_stats(set, 20.0, 2.0);
    CHECK(stats.min_gap < 0.2);
  }
  SUBCASE("min gap stabilizes for golden as R grows") {
    double gaps[3];
    double radii[3] = {10.0, 20.0, 40.0};
    for (int i = 0; i < 3; ++i) {
      auto set = generate(RealParam::golden(),
                          static_cast<long long>((radii[i] + 3) * (radii[i] + 3)) + 1);
      gaps[i] = metric_stats(set, radii[i], 2.0).min_gap;
    }
    CHECK(gaps[0] > 0.4);
    CHECK(gaps[1] > 0.4);
    CHECK(gaps[2] > 0.4);
    CHECK(std::abs(gaps[2] - gaps[1]) < 0.2);
  }
  SUBCASE("insufficient margin throws") {
    auto set = generate(RealParam::golden(), 100);
    CHECK_THROWS_AS(metric_stats(set, 10.0, 2.0), InsufficientPoints);
  }
}

TEST_CASE("disc count grows like R^2 + O(R)") {
  auto theta = RealParam::golden();
  auto set = generate(theta, 11000);
  for (double R : {10.0, 30.0, 60.0, 100.0}) {
    long long count = 0;
    for (const auto& p : set.points)
      if (p.radius() <= R) ++count;
    CHECK(std::abs(static_cast<double>(count) - R * R) <= 4.0 * R);
  }
}
