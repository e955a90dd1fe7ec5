#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "levyq/ensemble.hpp"
#include "levyq/hill.hpp"
#include "levyq/tv.hpp"

using namespace levyq;

namespace {

std::vector<Vec> gaussian_cloud(std::size_t n, double mean, std::uint64_t seed) {
  std::vector<Vec> out(n);
  RngStream rng(seed, 0);
  for (auto& x : out) x = {mean + rng.normal()};
  return out;
}

}  // namespace

TEST_CASE("empirical_tv basic semantics") {
  auto a = gaussian_cloud(20000, 0.0, 1);
  CHECK(empirical_tv(a, a).tv == 0.0);

  auto far = gaussian_cloud(20000, 200.0, 2);
  CHECK(empirical_tv(a, far).tv > 0.99);

  auto b = gaussian_cloud(20000, 0.0, 3);
  TvEstimate ab = empirical_tv(a, b);
  CHECK(ab.tv >= 0.0);
  CHECK(ab.tv <= 1.0);

  // symmetry with the shared binning
  TvBinning bins = scott_binning(a, b);
  CHECK(empirical_tv(a, b, bins).tv == doctest::Approx(empirical_tv(b, a, bins).tv));

  CHECK_THROWS_AS(empirical_tv({}, a), std::invalid_argument);
}

TEST_CASE("empirical_tv triangle inequality within estimator error") {
  auto a = gaussian_cloud(20000, 0.0, 4);
  auto b = gaussian_cloud(20000, 0.7, 5);
  auto c = gaussian_cloud(20000, 1.4, 6);
  double ab = empirical_tv(a, b).tv;
  double bc = empirical_tv(b, c).tv;
  double ac = empirical_tv(a, c).tv;
  CHECK(ac <= ab + bc + 0.05);
}

TEST_CASE("gaussian shift TV oracle (coarse)") {
  auto a = gaussian_cloud(200000, 0.0, 7);
  auto b = gaussian_cloud(200000, 1.0, 8);
  // closed form 2 Phi(1/2) - 1 = 0.38292...
  CHECK(empirical_tv(a, b).tv == doctest::Approx(0.3829249225480262).epsilon(0.05));
}

TEST_CASE("polynomial rate fit on exact curves") {
  TvCurve curve;
  for (double t : {2.0, 4.0, 8.0, 16.0, 32.0}) {
    curve.times.push_back(t);
    curve.tv.push_back(0.8 * std::pow(t, -0.5));
    curve.err.push_back(0.0);
  }
  curve.floor = 1e-6;
  RateFit fit = fit_polynomial_rate(curve);
  CHECK(fit.exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(std::log(0.8)).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  TvCurve flat = curve;
  for (double& v : flat.tv) v = 0.4;
  RateFit ffit = fit_polynomial_rate(flat);
  CHECK(ffit.exponent == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("polynomial rate fit on a perturbed curve") {
  TvCurve curve;
  RngStream rng(14, 0);
  for (double t : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0}) {
    curve.times.push_back(t);
    curve.tv.push_back(0.8 * std::pow(t, -0.5) * (1.0 + 0.05 * (rng.uniform() - 0.5)));
    curve.err.push_back(0.0);
  }
  curve.floor = 1e-6;
  RateFit fit = fit_polynomial_rate(curve);
  CHECK(std::fabs(fit.exponent + 0.5) < 0.05);
}

TEST_CASE("exponential rate fit") {
  TvCurve curve;
  for (double t : {1.0, 2.0, 3.0, 4.0, 5.0}) {
    curve.times.push_back(t);
    curve.tv.push_back(0.9 * std::exp(-0.3 * t));
    curve.err.push_back(0.0);
  }
  curve.floor = 1e-9;
  RateFit fit = fit_exponential_rate(curve);
  CHECK(-fit.exponent == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  // model mismatch shows up as poor R^2 on a long polynomial curve
  TvCurve poly;
  for (int k = 0; k < 12; ++k) {
    double t = std::pow(2.0, k);
    poly.times.push_back(t);
    poly.tv.push_back(std::pow(t, -0.5));
    poly.err.push_back(0.0);
  }
  poly.floor = 1e-9;
  CHECK(fit_exponential_rate(poly).r_squared < 0.9);
}

TEST_CASE("floor censoring") {
  TvCurve curve;
  curve.floor = 0.05;
  for (double t : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    curve.times.push_back(t);
    curve.tv.push_back(0.8 * std::pow(t, -1.0));
    curve.err.push_back(0.0);
  }
  // points with tv <= 0.1 are censored: t = 8, 16
  RateFit fit = fit_polynomial_rate(curve);
  CHECK(fit.censored.size() == 2);
  CHECK(fit.used_points == 3);

  TvCurve all_floor = curve;
  for (double& v : all_floor.tv) v = 0.06;
  CHECK_THROWS_AS(fit_polynomial_rate(all_floor), std::runtime_error);
}

TEST_CASE("hill estimator on synthetic tails") {
  RngStream rng(15, 0);
  std::vector<double> pareto(200000);
  for (double& v : pareto) v = std::pow(rng.uniform(), -1.0 / 1.5);
  HillEstimate h = hill_tail_index(pareto);
  CHECK(std::fabs(h.index - 1.5) < 0.1);
  CHECK(h.stable_tail);
  CHECK(h.ci_lo < h.index);
  CHECK(h.ci_hi > h.index);

  std::vector<double> expo(200000);
  for (double& v : expo) v = rng.exponential();
  HillEstimate he = hill_tail_index(expo);
  CHECK(!he.stable_tail);

  std::vector<double> constant(1000, 3.0);
  CHECK_THROWS_AS(hill_tail_index(constant), std::invalid_argument);
}

TEST_CASE("stationary sampling in noise-free test mode hits the fixed point") {
  EnsembleConfig cfg;
  cfg.params = recentred_params(2, 1.0, {1.0, 1.0}, {0.0, 0.0});
  cfg.policy = constant_policy({0.5, 0.5});
  cfg.driver.noise_free = true;
  cfg.driver.xi = {1.0, 1.0};
  cfg.dt = 1e-2;
  EnsembleSnapshot snap =
      stationary_sample(cfg, {2.0, -1.0}, 50.0, 200, 1.0, 10, 77);
  REQUIRE(snap.states[0].size() == 200);
  for (const Vec& x : snap.states[0]) {
    CHECK(x[0] == doctest::Approx(-0.5).epsilon(1e-4));
    CHECK(x[1] == doctest::Approx(-0.5).epsilon(1e-4));
  }
  CHECK(snap.overflow_aborts == 0);
}

TEST_CASE("stationary self-consistency for an abandonment model") {
  EnsembleConfig cfg;
  cfg.params = recentred_params(2, 1.0, {1.0, 1.0}, {1.0, 1.0});
  cfg.policy = constant_policy({0.5, 0.5});
  cfg.driver.variant = DriverVariant::Stable;
  cfg.driver.alpha = 1.5;
  cfg.driver.xi = {0.25, 0.25};
  cfg.dt = 1e-2;
  EnsembleSnapshot a = stationary_sample(cfg, {0.0, 0.0}, 60.0, 2000, 2.0, 40, 101);
  EnsembleSnapshot b = stationary_sample(cfg, {0.0, 0.0}, 60.0, 2000, 2.0, 40, 202);
  CHECK(empirical_tv(a.states[0], b.states[0]).tv <= 0.12);
}

TEST_CASE("stationary identity preconditions") {
  DriftParams p = recentred_params(2, 1.0, {1.0, 1.0}, {0.0, 0.0});
  CPMeasureSpec cp;  // no jumps
  EffectiveParams eff = effective_params(p, cp);
  REQUIRE(eff.beta_tilde == doctest::Approx(1.0));

  std::vector<Vec> sample = {{-1.0, -0.5}, {0.5, 0.2}, {-2.0, 0.5}};
  ControlPolicy pol = constant_policy({0.5, 0.5});
  StationaryIdentityReport rep = stationary_identity_check(sample, eff, p, pol);
  CHECK(rep.sample_mean == doctest::Approx((1.5 + 0.0 + 1.5) / 3.0));

  // positive-gamma class receiving queue mass is refused
  DriftParams pg = recentred_params(2, 1.0, {1.0, 1.0}, {0.5, 0.0});
  CHECK_THROWS_AS(stationary_identity_check(sample, eff, pg, pol),
                  std::invalid_argument);
  // gamma > 0 is fine when the policy starves that class
  ControlPolicy starve = constant_policy({0.0, 1.0});
  CHECK_NOTHROW(stationary_identity_check(sample, eff, pg, starve));

  EffectiveParams bad = eff;
  bad.beta_tilde = -0.2;
  CHECK_THROWS_AS(stationary_identity_check(sample, bad, p, pol),
                  std::invalid_argument);
}
