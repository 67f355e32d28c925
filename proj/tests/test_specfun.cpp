#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "oracle.hpp"
#include "reccalc/specfun.hpp"

namespace sf = reccalc::specfun;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Cycle-count enumeration over all permutations of {1..n}, the defining
// combinatorial model for the signless first-kind numbers.
int count_perms_with_cycles(int n, int cycles) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    std::vector<bool> seen(n, false);
    int c = 0;
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      ++c;
      for (int j = i; !seen[j]; j = perm[j]) seen[j] = true;
    }
    if (c == cycles) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// Partition {1..n} into exactly `blocks` nonempty blocks by brute force.
int count_partitions(int n, int blocks) {
  int count = 0;
  std::vector<int> assign(n, 0);
  const auto total = static_cast<long>(std::pow(blocks, n));
  for (long code = 0; code < total; ++code) {
    long c = code;
    std::vector<bool> used(blocks, false);
    for (int i = 0; i < n; ++i) {
      assign[i] = static_cast<int>(c % blocks);
      used[assign[i]] = true;
      c /= blocks;
    }
    bool all = true;
    for (bool u : used) all = all && u;
    if (all) ++count;
  }
  int fact = 1;
  for (int i = 2; i <= blocks; ++i) fact *= i;
  return count / fact;  // labelled blocks over-count by blocks!
}

}  // namespace

TEST_CASE("J at zero and at the optimal-threshold root") {
  CHECK(sf::J(0.0).value == 0.0);
  CHECK(std::abs(sf::J(0.804352).value - 1.0) < 1e-5);
}

TEST_CASE("J matches the quadrature oracle") {
  for (double t : {-5.0, -2.0, -0.5, 0.3, 1.0, 3.0, 5.0}) {
    const double expected = oracle::integrate(
        [](double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }, 0.0, t,
        1e-13);
    CHECK(std::abs(sf::J(t).value - expected) < 1e-10);
  }
}

TEST_CASE("J error bound is honest") {
  for (double t : {0.5, 2.0, 10.0}) {
    const auto v = sf::J(t);
    const double expected = oracle::integrate(
        [](double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }, 0.0, t,
        1e-13);
    CHECK(std::abs(v.value - expected) <= v.abs_error_bound + 1e-13);
    CHECK(v.abs_error_bound <= 1e-10 * std::max(1.0, std::abs(v.value)));
  }
  // within the tolerance-relevant range the bound meets the default target
  for (double t : {-5.0, -1.0, 0.804352, 3.0, 5.0}) {
    CHECK(sf::J(t).abs_error_bound <= sf::kDefaultTol);
  }
  for (double s : {0.1, 1.0, 4.0}) {
    CHECK(sf::I(kInf, s).abs_error_bound <= sf::kDefaultTol);
    CHECK(sf::I2(kInf, s).abs_error_bound <= sf::kDefaultTol);
  }
}

TEST_CASE("J overflow cap") {
  CHECK_THROWS_AS((void)sf::J(701.0), sf::PrecisionError);
  CHECK_THROWS_AS((void)sf::J(-701.0), sf::PrecisionError);
}

TEST_CASE("I empty and infinite intervals") {
  CHECK(sf::I(1.0, 1.0).value == 0.0);
  CHECK(sf::I(0.5, 1.0).value == 0.0);  // t < s convention
  const double expected = oracle::expint_tail(1.0);
  CHECK(std::abs(sf::I(kInf, 1.0).value - expected) < 1e-12);
}

TEST_CASE("I rejects nonpositive lower endpoint") {
  CHECK_THROWS_AS((void)sf::I(1.0, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)sf::I(1.0, -2.0), std::domain_error);
}

TEST_CASE("I additivity over adjacent intervals") {
  for (double s : {0.1, 0.7, 2.0}) {
    for (double t : {3.0 * s, kInf}) {
      const double m = 1.5 * s;
      CHECK(std::abs(sf::I(t, s).value - sf::I(m, s).value -
                     sf::I(t, m).value) < 1e-12);
    }
  }
}

TEST_CASE("optimal full-information value from the exponential integral") {
  // (e^{t_F} - t_F - 1) I(t_F) + e^{-t_F} with J(t_F) = 1
  const double tf = 0.8043522628;
  const double v = (std::exp(tf) - tf - 1.0) * sf::I(kInf, tf).value +
                   std::exp(-tf);
  CHECK(std::abs(v - 0.580164) < 1e-5);
}

TEST_CASE("I2 reduction and quadrature") {
  CHECK(sf::I2(1.0, 1.0).value == 0.0);
  const double direct21 = oracle::integrate(
      [](double x) { return std::exp(-x) / (x * x); }, 1.0, 2.0, 1e-13);
  CHECK(std::abs(sf::I2(2.0, 1.0).value - direct21) < 1e-10);
  const double inf1 = oracle::integrate(
      [](double x) { return std::exp(-x) / (x * x); }, 1.0, 81.0, 1e-13);
  CHECK(std::abs(sf::I2(kInf, 1.0).value - inf1) < 1e-10);
  CHECK(std::abs(sf::I2(kInf, 1.0).value -
                 (std::exp(-1.0) - sf::I(kInf, 1.0).value)) < 1e-12);
  CHECK_THROWS_AS((void)sf::I2(0.5, 1.0), std::domain_error);
}

TEST_CASE("scaled integrals match the plain ones in range") {
  for (double s : {0.3, 1.0, 4.0}) {
    for (double t : {s, 2.0 * s, 20.0, kInf}) {
      if (t < s) continue;
      CHECK(std::abs(sf::scaled_I(t, s) - std::exp(s) * sf::I(t, s).value) <
            1e-12 * std::exp(s));
      CHECK(std::abs(sf::scaled_I2(t, s) - std::exp(s) * sf::I2(t, s).value) <
            1e-12 * std::exp(s));
    }
  }
  // and they stay finite far beyond the overflow point of e^s
  CHECK(std::isfinite(sf::scaled_I(kInf, 1e6)));
  CHECK(std::isfinite(sf::scaled_I2(kInf, 1e6)));
  CHECK(sf::scaled_I(kInf, 1e6) > 0.0);
}

TEST_CASE("E1 split evaluation against the oracle") {
  for (double x : {0.05, 0.3, 0.9999, 1.0, 1.0001, 3.0, 15.0, 40.0}) {
    CHECK(std::abs(sf::E1(x) - oracle::expint_tail(x)) < 1e-13);
  }
}

TEST_CASE("scaled J agrees across the asymptotic switch") {
  for (double t : {1.0, 10.0, 44.0, 46.0, 60.0, 150.0}) {
    const double direct = std::exp(-t) * sf::J(t).value;
    CHECK(std::abs(sf::exp_scaled_J(t) - direct) < 1e-12 * direct);
  }
  // The strict term-cutoff rule gives out around t ~ 170, where only the
  // scaled form is needed anyway.
  CHECK_THROWS_AS((void)sf::J(250.0), sf::PrecisionError);
  CHECK(std::isfinite(sf::exp_scaled_J(250.0)));
  // large-argument asymptote ~ 1/t
  CHECK(sf::exp_scaled_J(1e8) == doctest::Approx(1e-8).epsilon(1e-6));
}

TEST_CASE("J at negative arguments via the E1 identity") {
  for (double s : {0.7, 1.0, 2.0}) {
    CHECK(std::abs(sf::J_negative(s) - sf::J(-s).value) < 1e-12);
  }
  CHECK(std::abs(sf::J_negative(10.0) -
                 (-sf::kEulerGamma - std::log(10.0) - sf::E1(10.0))) == 0.0);
}

TEST_CASE("harmonic numbers") {
  CHECK(sf::harmonic(0) == 0.0);
  CHECK(sf::harmonic(1) == 1.0);
  CHECK(std::abs(sf::harmonic(4) - 25.0 / 12.0) < 1e-15);
  CHECK_THROWS_AS((void)sf::harmonic(-1), std::domain_error);
}

TEST_CASE("Stirling numbers against brute-force enumeration") {
  using sf::StirlingKind;
  CHECK(count_perms_with_cycles(3, 2) == 3);
  CHECK(sf::stirling(StirlingKind::first_signless, 3, 2) == 3);
  CHECK(count_partitions(3, 2) == 3);
  CHECK(sf::stirling(StirlingKind::second, 3, 2) == 3);
  for (int n = 1; n <= 6; ++n) {
    for (int j = 0; j <= n; ++j) {
      CHECK(sf::stirling(StirlingKind::first_signless, n, j) ==
            count_perms_with_cycles(n, j));
    }
  }
  for (int k = 0; k <= 64; k += 16) {
    CHECK(sf::stirling(StirlingKind::first_signless, k, k) == 1);
  }
}

TEST_CASE("Stirling row sums and bounds hold exactly") {
  const auto& s1 = sf::stirling_first();
  for (int k = 0; k <= s1.max_index(); ++k) {
    sf::BigInt sum = 0;
    for (int j = 0; j <= k; ++j) sum += s1.exact(k, j);
    CHECK(sum == sf::factorial_exact(k));
  }
  const auto& s2 = sf::stirling_second();
  for (int k = 1; k <= s2.max_index(); ++k) {
    for (int j = 1; j <= k; ++j) {
      sf::BigInt bound = 1;
      for (int i = 0; i < k; ++i) bound *= j;
      CHECK(s2.exact(k, j) <= bound);
    }
  }
}

TEST_CASE("Stirling table bounds are enforced") {
  CHECK_THROWS_AS((void)sf::stirling(sf::StirlingKind::second, 65, 1),
                  std::out_of_range);
  CHECK_THROWS_AS((void)sf::stirling(sf::StirlingKind::second, 5, 6),
                  std::out_of_range);
}

TEST_CASE("nested integral identity for J") {
  // Both layers are integrated after a log substitution so the 1/y
  // singularities become smooth double-exponential integrands.
  for (double s : {0.5, 1.0, 2.0}) {
    const double js = sf::J(s).value;
    const auto inner = [s](double x) {
      // integral_x^s e^y/y dy with y = e^u
      return oracle::integrate(
          [](double u) { return std::exp(std::exp(u)); }, std::log(x),
          std::log(s), 1e-12);
    };
    // outer integral over x = e^v, truncated at x = e^{-40}
    const double outer = oracle::integrate(
        [&](double v) {
          const double x = std::exp(v);
          return x * std::exp(-x) * inner(x);
        },
        -40.0, std::log(s), 1e-10);
    CHECK(std::abs(outer - js) < 1e-8);
  }
}
