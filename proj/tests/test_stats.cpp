#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "reccalc/rng.hpp"
#include "reccalc/stats.hpp"

namespace st = reccalc::stats;
using reccalc::rng::Stream;

TEST_CASE("identical samples give D = 0, p = 1") {
  std::vector<double> v = {0.1, 0.4, 0.4, 0.9};
  const auto r = st::ks_two_sample(v, v);
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == 1.0);
}

TEST_CASE("two-sample null and alternative cases") {
  Stream rng(2024, 0);
  std::vector<double> u1(10000), u2(10000), ex(10000);
  for (auto& x : u1) x = rng.uniform();
  for (auto& x : u2) x = rng.uniform();
  for (auto& x : ex) x = rng.exponential();
  CHECK(st::ks_two_sample(u1, u2).p_value > 0.01);
  CHECK(st::ks_two_sample(u1, ex).p_value < 1e-6);
  CHECK_THROWS_AS((void)st::ks_two_sample({}, u1), std::invalid_argument);
}

TEST_CASE("one-sample test against the exact cdf") {
  Stream rng(5150, 1);
  std::vector<double> u(20000);
  for (auto& x : u) x = rng.uniform();
  const auto null_fit =
      st::ks_one_sample(u, [](double x) { return std::clamp(x, 0.0, 1.0); });
  CHECK(null_fit.p_value > 0.01);
  const auto bad_fit =
      st::ks_one_sample(u, [](double x) { return std::clamp(x * x, 0.0, 1.0); });
  CHECK(bad_fit.p_value < 1e-10);
}

TEST_CASE("kolmogorov survival at classical critical points") {
  CHECK(st::kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(st::kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(2e-3));
  CHECK(st::kolmogorov_survival(0.0) == 1.0);
}

TEST_CASE("regularized upper gamma against independent forms") {
  // Q(1,x) = e^{-x}; Q(1/2,x) = erfc(sqrt(x))
  for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
    CHECK(st::gamma_q(1.0, x) == doctest::Approx(std::exp(-x)).epsilon(1e-12));
    CHECK(st::gamma_q(0.5, x) ==
          doctest::Approx(std::erfc(std::sqrt(x))).epsilon(1e-12));
  }
  CHECK(st::gamma_q(2.5, 0.0) == 1.0);
  CHECK_THROWS_AS((void)st::gamma_q(0.0, 1.0), std::domain_error);
}

TEST_CASE("chi-square merges sparse cells") {
  // expected counts below 5 are pooled; a uniform fit on fair data passes
  Stream rng(77, 0);
  const int n = 10000;
  std::vector<double> obs(6, 0.0);
  std::vector<double> expd = {n * 0.3, n * 0.3, n * 0.3,
                              n * 0.0995, 3.5, 1.5};
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    int cell = u < 0.3 ? 0 : u < 0.6 ? 1 : u < 0.9 ? 2 : 3;
    if (u > 0.9995) cell = u > 0.99965 ? 5 : 4;
    obs[cell] += 1.0;
  }
  const auto r = st::chi2_gof(obs, expd);
  CHECK(r.dof == 4);  // the two sparse cells pool into one
  CHECK(r.p_value > 0.001);
  CHECK_THROWS_AS((void)st::chi2_gof({1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("chi-square detects a wrong model") {
  std::vector<double> obs = {100, 200, 700};
  std::vector<double> expd = {333.3, 333.3, 333.4};
  CHECK(st::chi2_gof(obs, expd).p_value < 1e-12);
}
