#include "phyllo/fitgeo.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "phyllo/errors.hpp"
#include "phyllo/phyllo_set.hpp"

using namespace phyllo;
using namespace phyllo::fitgeo;

namespace {

std::vector<std::complex<double>> synthetic_golden(long long n_lo, long long n_hi,
                                                   double noise_sigma = 0.0,
                                                   unsigned seed = 1) {
  auto set = generate(RealParam::golden(), n_hi);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, noise_sigma);
  std::vector<std::complex<double>> pts;
  for (const auto& p : set.points) {
    if (p.n < n_lo) continue;
    double dx = noise_sigma > 0 ? noise(rng) : 0.0;
    double dy = noise_sigma > 0 ? noise(rng) : 0.0;
    pts.emplace_back(p.x + dx, p.y + dy);
  }
  return pts;
}

}  // namespace

TEST_CASE("observation validation") {
  std::vector<std::complex<double>> few(10, {0.0, 0.0});
  CHECK_THROWS_AS(make_observation(few), Error);
  auto pts = synthetic_golden(50, 120);
  pts.push_back(pts.front());
  CHECK_THROWS_AS(make_observation(pts), Error);
}

TEST_CASE("noiseless synthetic recovery") {
  auto obs = make_observation(synthetic_golden(50, 400));
  auto fit = fit_sunflower(obs);
  double golden_frac = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(fit.converged);
  CHECK(std::abs(fit.theta - golden_frac) < 1e-8);
  CHECK(std::abs(fit.gamma - 50.0) < 1e-4);
  CHECK(std::abs(fit.A) < 1e-6);
  CHECK(std::abs(std::abs(fit.C) - 1.0) < 1e-6);
  CHECK(fit.rms_residual < 1e-8);
}

TEST_CASE("noisy synthetic recovery") {
  auto obs = make_observation(synthetic_golden(50, 400, 0.01, 7));
  auto fit = fit_sunflower(obs);
  double golden_frac = (std::sqrt(5.0) - 1.0) / 2.0;
  CHECK(std::abs(fit.theta - golden_frac) < 1e-4);
  CHECK(fit.rms_residual < 0.05);
}

TEST_CASE("theta and theta+1 produce the same set; the fit reports the fraction") {
  // phi and phi-1 generate identical point sets
  auto a = generate(RealParam::golden(), 300);
  auto b = generate(RealParam::parse("golden-1"), 300);
  for (size_t i = 0; i < a.points.size(); i += 37) {
    CHECK(a.points[i].x == doctest::Approx(b.points[i].x).epsilon(1e-9));
    CHECK(a.points[i].y == doctest::Approx(b.points[i].y).epsilon(1e-9));
  }
  auto obs = make_observation(synthetic_golden(40, 250));
  auto fit = fit_sunflower(obs);
  CHECK(fit.theta >= 0.0);
  CHECK(fit.theta < 1.0);
}

TEST_CASE("collinear data is rejected") {
  std::vector<std::complex<double>> pts;
  for (int i = 0; i < 40; ++i) pts.emplace_back(double(i), 2.0 * i);
  auto obs = make_observation(pts);
  CHECK_THROWS_AS(fit_sunflower(obs), DegenerateData);
}

TEST_CASE("local invariants of reference lattices") {
  SUBCASE("square lattice -> i") {
    std::vector<std::complex<double>> pts;
    for (int i = -8; i <= 8; ++i)
      for (int j = -8; j <= 8; ++j) pts.emplace_back(double(i), double(j));
    auto inv = local_invariants(make_observation(pts));
    REQUIRE(inv.reduced.size() > 10);
    for (const auto& z : inv.reduced) {
      CHECK(std::abs(z.x - 0.0) < 1e-9);
      CHECK(std::abs(z.y - 1.0) < 1e-9);
    }
  }
  SUBCASE("hexagonal lattice -> (1+i sqrt 3)/2 up to orbit") {
    std::vector<std::complex<double>> pts;
    for (int i = -9; i <= 9; ++i)
      for (int j = -9; j <= 9; ++j)
        pts.emplace_back(i + 0.5 * j, std::sqrt(3.0) / 2.0 * j);
    auto inv = local_invariants(make_observation(pts));
    REQUIRE(inv.reduced.size() > 10);
    hyperbolic::HPoint hex{0.5, std::sqrt(3.0) / 2.0};
    for (const auto& z : inv.reduced)
      CHECK(hyperbolic::orbit_distance(z, hex) < 1e-6);
  }
}

TEST_CASE("local invariants of synthetic data track the phyllotactic geodesic") {
  auto obs = make_observation(synthetic_golden(150, 900));
  auto inv = local_invariants(obs);
  REQUIRE(inv.reduced.size() > 100);
  long long checked = 0;
  for (size_t k = 0; k < inv.reduced.size(); ++k) {
    double r = inv.radii[k];
    if (r * r < 400.0) continue;  // n >= 400 per the contract
    auto gamma_red = hyperbolic::reduce_to_fundamental_domain(
        hyperbolic::phyllotactic_geodesic(RealParam::golden(), r * r));
    CHECK(hyperbolic::orbit_distance(inv.reduced[k], gamma_red.point) < 0.1);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("arc distance formula") {
  hyperbolic::GeodesicArc vert;
  vert.kind = hyperbolic::GeodesicArc::Kind::Vertical;
  vert.x0 = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(-2.0, 2.0), uy(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    hyperbolic::HPoint z{ux(rng), uy(rng)};
    CHECK(arc_distance(z, vert) == doctest::Approx(std::asinh(std::abs(z.x) / z.y)));
    // cross-check by dense sampling of the axis
    double best = 1e300;
    for (double s = -8.0; s <= 8.0; s += 1e-3)
      best = std::min(best, hyperbolic::hyperbolic_distance(z, {0.0, std::exp(s)}));
    CHECK(arc_distance(z, vert) == doctest::Approx(best).epsilon(1e-6));
  }
}

TEST_CASE("geodesic fit on exact samples") {
  auto golden = RealParam::golden();
  std::vector<hyperbolic::HPoint> samples;
  for (double t = 50.0; t <= 800.0; t *= 1.12)
    samples.push_back(hyperbolic::phyllotactic_geodesic(golden, t));
  auto fit = fit_geodesic(samples);
  CHECK(fit.max_residual < 1e-10);
  double frac = golden.frac();
  // endpoints 0 and 1/{theta}, possibly swapped by the lift's global map
  double lo = fit.endpoint_lo, hi = fit.endpoint_hi;
  bool direct = std::abs(lo - 0.0) < 1e-6 && std::abs(hi - 1.0 / frac) < 1e-6;
  CHECK(direct);
}

TEST_CASE("geodesic fit with hyperbolic noise") {
  auto golden = RealParam::golden();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> noise(0.0, 0.05 / std::sqrt(2.0));
  // sample across the visible part of the arc so the noisy fit is well posed
  std::vector<hyperbolic::HPoint> samples;
  for (double t = 0.05; t <= 50.0; t *= 1.12) {
    auto z = hyperbolic::phyllotactic_geodesic(golden, t);
    // hyperbolic perturbation: displace by ~0.05 in the local metric
    z.x += noise(rng) * z.y;
    z.y *= std::exp(noise(rng));
    samples.push_back(z);
  }
  auto fit = fit_geodesic(samples);
  double frac = golden.frac();
  CHECK(std::abs(fit.endpoint_lo - 0.0) < 0.05);
  CHECK(std::abs(fit.endpoint_hi - 1.0 / frac) < 0.05);
}

TEST_CASE("underdetermined geodesic fit") {
  std::vector<hyperbolic::HPoint> one = {{0.1, 1.2}};
  CHECK_THROWS_AS(fit_geodesic(one), Error);
}
