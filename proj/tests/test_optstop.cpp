#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "oracle.hpp"
#include "reccalc/optstop.hpp"
#include "reccalc/recordlaw.hpp"
#include "reccalc/specfun.hpp"

namespace os = reccalc::optstop;
namespace rl = reccalc::recordlaw;
namespace sf = reccalc::specfun;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("full-information threshold") {
  const auto sol = os::solve_tF();
  CHECK(std::abs(sol.root - 0.804352) < 1e-5);
  CHECK(std::abs(sol.defining_residual) < 1e-12);
  CHECK(sol.bracket.first <= sol.root);
  CHECK(sol.root <= sol.bracket.second);
  CHECK(std::abs(rl::p_count(sol.root, 0) - rl::p_count(sol.root, 1)) < 1e-10);
}

TEST_CASE("vertical-cut threshold and its equivalent equations") {
  const auto sol = os::solve_tP();
  const double t = sol.root;
  CHECK(std::abs(t - 2.11982) < 1e-5);
  CHECK(std::abs(rl::q_count(t, 0) - rl::q_count(t, 1)) < 1e-12);
  CHECK(std::abs(-sf::J_negative(t) - std::exp(-t) * sf::J(t).value -
                 (1.0 - std::exp(-t))) < 1e-8);
  CHECK(std::abs(rl::p_count(t, 1) - rl::p_count(t, 0) -
                 (-1.0 - sf::J_negative(t))) < 1e-8);
}

TEST_CASE("vertical-cut value in exponential-integral form") {
  // u(t) = (t_P J(t_P) - e^{t_P} + 1) I2(t,t_P) + (1 - e^{-t_P})/t_P
  const double s = os::t_P();
  const double coeff = s * sf::J(s).value - std::exp(s) + 1.0;
  for (double t : {3.0, 10.0, 50.0}) {
    const double direct =
        coeff * sf::I2(t, s).value + (1.0 - std::exp(-s)) / s;
    CHECK(std::abs(os::value_VC(t) - direct) < 1e-12);
  }
}

TEST_CASE("value functions at the anchors") {
  CHECK(std::abs(os::value_FI(kInf) - 0.580164) < 1e-5);
  CHECK(os::value_FI(0.0) == 0.0);
  CHECK(std::abs(os::value_FI(0.5) - rl::p_count(0.5, 1)) < 1e-14);
  CHECK(os::value_HC(7.0) == os::value_VC(7.0));
  CHECK(std::abs(os::value_VC(1.0) - rl::q_count(1.0, 1)) < 1e-14);
}

TEST_CASE("value function is nondecreasing and dominates no-stop") {
  double prev = 0.0;
  for (double t : {0.2, 0.6, 1.0, 3.0, 9.0, 27.0, kInf}) {
    const double v = os::value_FI(t);
    CHECK(v >= prev - 1e-13);
    prev = v;
  }
  CHECK(os::value_FI(2.0) > rl::p_count(2.0, 0));
}

TEST_CASE("greedy policy optimum") {
  const auto g = os::greedy_optimum();
  CHECK(std::abs(g.t_star - 1.50286) < 1e-4);
  CHECK(std::abs(g.value - 0.51735) < 1e-4);
  CHECK(std::abs(rl::p_deriv(g.t_star, 1)) < 1e-8);
}

TEST_CASE("duration values") {
  CHECK(std::abs(os::duration_value(1.0, 2.0) - rl::q_count(1.0, 1)) < 1e-14);
  const double at_tp = os::duration_value(10.0, os::t_P());
  CHECK(at_tp >= os::duration_value(10.0, 0.5 * os::t_P()));
  CHECK(at_tp >= os::duration_value(10.0, 2.0 * os::t_P()));
  CHECK_THROWS_AS((void)os::duration_value(kInf, 1.0), std::domain_error);
}

TEST_CASE("ordinary-Poisson coincidences") {
  const auto triple = os::poisson_digression(1);
  CHECK(triple.size() == 3);
  for (double v : triple) CHECK(std::abs(v - std::exp(-1.0)) < 1e-12);
  const auto quad = os::poisson_digression(2);
  CHECK(quad.size() == 4);
  for (double v : quad) CHECK(std::abs(v - 2.0 * std::exp(-2.0)) < 1e-12);
  const auto three = os::poisson_digression(3);
  for (double v : three) {
    CHECK(std::abs(v - std::exp(-3.0) * 27.0 / 6.0) < 1e-12);
  }
  CHECK_THROWS_AS((void)os::poisson_digression(0), std::domain_error);
}

TEST_CASE("stop-coordinate distribution branches") {
  CHECK(std::abs(os::stop_time_cdf(0.5, 0.3, 1.0) -
                 (1.0 - std::exp(-0.15))) < 1e-15);
  CHECK(os::stop_time_cdf(3.0, 0.0, 1.0) == 0.0);
  // closed form beyond the hyperbola: matches the displayed expression
  const double s = 1.0, xi = 0.4;
  const double om = 1.0 - xi;
  const double displayed =
      (xi - 1.0) / xi * (std::exp(-xi * s) - std::exp(-xi * s / om)) +
      s * sf::I(s * xi / om, s * xi).value + 1.0 - std::exp(-s * xi);
  CHECK(std::abs(os::stop_time_cdf(kInf, xi, s) - displayed) < 1e-14);
  CHECK(std::abs(os::stop_time_cdf(10.0, xi, s) - displayed) < 1e-14);
  // t -> limit of no-stop complement as xi -> 1
  const double lim = os::stop_time_cdf(kInf, 1.0 - 1e-9, s);
  CHECK(std::abs(lim - (1.0 - std::exp(-s) + s * sf::E1(s))) < 1e-7);
  CHECK_THROWS_AS((void)os::stop_time_cdf(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("win-rate density integrates to the policy value") {
  for (double s : {os::t_F(), 1.0, 2.0}) {
    const double total = oracle::integrate(
        [s](double x) { return os::win_rate_density(x, s); }, 0.0, 1.0, 1e-9);
    CHECK(std::abs(total - rl::p_threshold_count(kInf, s, 1)) < 1e-6);
  }
  const double vf = oracle::integrate(
      [](double x) { return os::win_rate_density(x, os::t_F()); }, 0.0, 1.0,
      1e-9);
  CHECK(std::abs(vf - 0.580164) < 1e-5);
}

TEST_CASE("win-rate endpoints are the analytic limits") {
  for (double s : {os::t_F(), 1.5}) {
    CHECK(os::win_rate_density(1.0, s) == std::exp(-s));
    CHECK(os::win_rate_density(0.0, s) == -std::expm1(-s));
    CHECK(std::abs(os::win_rate_density(1e-4, s) -
                   os::win_rate_density(0.0, s)) < 1e-3);
    CHECK(std::abs(os::win_rate_density(1.0 - 1e-4, s) -
                   os::win_rate_density(1.0, s)) < 1e-3);
  }
}

TEST_CASE("value curves") {
  const auto curve = os::value_curve("fi", {0.5, 1.0, 2.0, kInf});
  CHECK(curve.values.size() == 4);
  CHECK(curve.values.back() == os::value_FI(kInf));
  CHECK_THROWS_AS((void)os::value_curve("nope", {1.0}), std::invalid_argument);
}
