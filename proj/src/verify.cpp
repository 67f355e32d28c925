#include "reccalc/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "reccalc/optstop.hpp"
#include "reccalc/quadrature.hpp"
#include "reccalc/recordlaw.hpp"
#include "reccalc/simulate.hpp"
#include "reccalc/specfun.hpp"
#include "reccalc/stats.hpp"

namespace reccalc::verify {

namespace sf = reccalc::specfun;
namespace rl = reccalc::recordlaw;
namespace os = reccalc::optstop;
namespace qd = reccalc::quadrature;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Ctx {
  std::uint64_t seed;
  unsigned workers;
  std::vector<CheckResult> results;

  void resid(const std::string& name, const std::string& suite, double measured,
             double threshold, const std::string& detail = "") {
    results.push_back({name, suite, measured <= threshold, measured, threshold,
                       "resid", detail});
  }
  void pvalue(const std::string& name, const std::string& suite, double p,
              double threshold, const std::string& detail = "") {
    results.push_back({name, suite, p > threshold, p, threshold, "p", detail});
  }
  void sigma(const std::string& name, const std::string& suite, double z,
             double threshold = 4.0, const std::string& detail = "") {
    results.push_back({name, suite, z <= threshold, z, threshold, "sigma",
                       detail});
  }
  void boolean(const std::string& name, const std::string& suite, bool ok,
               const std::string& detail = "") {
    results.push_back({name, suite, ok, ok ? 1.0 : 0.0, 1.0, "bool", detail});
  }
};

double z_score(const parallel::MCEstimate& est, double target) {
  const double se = std::max(est.std_error, 1e-300);
  return std::abs(est.mean - target) / se;
}

double fd1(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}
double fd2(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
}

double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- identities

void check_specfun(Ctx& ctx) {
  {
    double worst = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0}) {
      const double m = 2.0 * s;
      for (double t : {4.0 * s, kInf}) {
        const double lhs = sf::I(t, s).value;
        const double rhs = sf::I(m, s).value + sf::I(t, m).value;
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    }
    ctx.resid("specfun.I.additivity", "identities", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double s : {0.1, 0.5, 1.0, 2.0, 5.0}) {
      for (double t : {s, 2.0 * s, 10.0, 50.0, kInf}) {
        if (t < s) continue;
        const double direct = sf::I2(t, s).value;
        const double head =
            std::exp(-s) / s - (t == kInf ? 0.0 : std::exp(-t) / t);
        worst = std::max(worst,
                         std::abs(direct - (head - sf::I(t, s).value)));
      }
    }
    ctx.resid("specfun.I2.reduction", "identities", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double t : {-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0}) {
      const auto q = qd::integrate(
          [](double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; },
          0.0, t, 1e-13, 1e-13);
      worst = std::max(worst, std::abs(sf::J(t).value - q.value));
    }
    ctx.resid("specfun.J.vs_quadrature", "identities", worst, 1e-10);
  }
  {
    // integral_0^s e^{-x} (integral_x^s e^y/y dy) dx = J(s)
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
      const double js = sf::J(s).value;
      const auto q = qd::integrate(
          [s, js](double x) {
            const double inner = js - sf::J(x).value + std::log(s / x);
            return std::exp(-x) * inner;
          },
          1e-14, s, 1e-10, 1e-12);
      worst = std::max(worst, std::abs(q.value - js));
    }
    ctx.resid("specfun.nested_integral", "identities", worst, 1e-8);
  }
  {
    const auto& s1 = sf::stirling_first();
    int bad = 0;
    for (int k = 0; k <= s1.max_index(); ++k) {
      sf::BigInt sum = 0;
      for (int j = 0; j <= k; ++j) sum += s1.exact(k, j);
      if (sum != sf::factorial_exact(k)) ++bad;
    }
    ctx.resid("specfun.stirling1.rowsum", "identities", bad, 0.0,
              "sum_j sigma1(k,j) = k!");
  }
  {
    const auto& s2 = sf::stirling_second();
    int bad = 0;
    for (int k = 1; k <= s2.max_index(); ++k) {
      for (int j = 1; j <= k; ++j) {
        sf::BigInt bound = 1;
        for (int i = 0; i < k; ++i) bound *= j;
        if (s2.exact(k, j) > bound) ++bad;
      }
    }
    ctx.resid("specfun.stirling2.bound", "identities", bad, 0.0,
              "sigma2(k,j) <= j^k");
  }
  {
    double worst = 0.0;
    for (double x : {0.2, 0.5, 0.999, 1.0, 1.001, 2.0, 5.0, 20.0}) {
      const auto q = qd::integrate(
          [](double u) { return std::exp(-u) / u; }, x, x + 60.0, 1e-15, 1e-14);
      worst = std::max(worst, std::abs(sf::E1(x) - q.value));
    }
    ctx.resid("specfun.E1.vs_quadrature", "identities", worst, 1e-13);
  }
  {
    double worst = 0.0;
    for (double t : {40.0, 44.9, 45.1, 60.0}) {
      const double direct = std::exp(-t) * sf::J(t).value;
      worst = std::max(worst, std::abs(sf::exp_scaled_J(t) - direct) /
                                  std::abs(direct));
    }
    ctx.resid("specfun.scaledJ.branches", "identities", worst, 1e-13);
  }
  {
    double worst = 0.0;
    for (double s : {0.6, 1.0, 2.0}) {
      worst = std::max(worst, std::abs(sf::J_negative(s) - sf::J(-s).value));
    }
    ctx.resid("specfun.Jneg.identity", "identities", worst, 1e-12);
  }
}

void check_recordlaw(Ctx& ctx) {
  {
    double worst = 0.0;
    for (double t : {0.25, 1.0, 2.0, 5.0, 10.0}) {
      worst = std::max(worst,
                       std::abs(rl::p_count_series(t, 0) - std::exp(-t)));
      worst = std::max(worst,
                       std::abs(rl::p_count_series(t, 1) - rl::p_count(t, 1)));
      worst = std::max(worst, std::abs(rl::q_count_series(t, 0) -
                                       rl::q_count(t, 0)));
      worst = std::max(worst, std::abs(rl::q_count_series(t, 1) -
                                       rl::q_count(t, 1)));
    }
    ctx.resid("recordlaw.count.closed_forms", "identities", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double t : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (bool pkind : {true, false}) {
        const auto dist = pkind ? rl::p_distribution(t) : rl::q_distribution(t);
        double sum = dist.tail_bound;
        for (double p : dist.probs) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
      }
    }
    ctx.resid("recordlaw.normalization", "identities", worst, 1e-10);
  }
  {
    double worst = 0.0;
    for (int j : {1, 2, 3}) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const auto f = [j](double x) { return rl::p_count(x, j); };
        const double lhs = fd1(f, t, 1e-4);
        const double integral =
            qd::integrate([j](double x) { return rl::p_count(x, j - 1); }, 0.0,
                          t, 1e-12, 1e-12)
                .value;
        worst = std::max(worst,
                         std::abs(lhs + rl::p_count(t, j) - integral / t));
      }
    }
    ctx.resid("recordlaw.p_rec.ode", "identities", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int j : {1, 2, 3}) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const auto f = [j](double x) { return rl::q_count(x, j); };
        const double lhs = fd1(f, t, 1e-4);
        const double integral =
            qd::integrate([j](double x) { return rl::q_count(x, j - 1); }, 0.0,
                          t, 1e-12, 1e-12)
                .value;
        worst = std::max(
            worst, std::abs(lhs + (1.0 + 1.0 / t) * rl::q_count(t, j) -
                            integral / t));
      }
    }
    ctx.resid("recordlaw.q_rec.ode", "identities", worst, 1e-6);
  }
  {
    double worst = 0.0;
    for (int j : {1, 2, 3}) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const auto f = [j](double x) { return rl::p_count(x, j); };
        const double lhs = fd1(f, t, 1e-4);
        worst = std::max(worst, std::abs(lhs + rl::p_count(t, j) -
                                         rl::q_count(t, j - 1)));
      }
    }
    ctx.resid("recordlaw.pq.derivative_relation", "identities", worst, 1e-8);
  }
  {
    double worst = 0.0;
    for (int j : {0, 1, 2}) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        const double avg =
            qd::integrate([j](double x) { return rl::p_count(x, j); }, 0.0, t,
                          1e-12, 1e-12)
                .value /
            t;
        worst = std::max(worst, std::abs(avg - rl::q_count(t, j)));
      }
    }
    ctx.resid("recordlaw.cesaro", "identities", worst, 1e-8);
  }
  {
    const double tp = os::t_P();
    ctx.resid("recordlaw.duality.q1_p1_at_tP", "identities",
              std::abs(rl::q_threshold_count(kInf, tp, 1) -
                       rl::p_threshold_count(kInf, tp, 1)),
              1e-10);
    const double tf = os::t_F();
    ctx.resid("recordlaw.coincidence.q0_p1_at_tF", "identities",
              std::abs(rl::q_threshold_count(kInf, tf, 0) -
                       rl::p_threshold_count(kInf, tf, 1)),
              1e-10);
    const double s12 = bisect(
        [](double s) { return rl::p_count(s, 1) - rl::p_count(s, 2); }, 1.8,
        4.0);
    ctx.resid("recordlaw.duality.q1_p2_at_p1p2_root", "identities",
              std::abs(rl::q_threshold_count(kInf, s12, 1) -
                       rl::p_threshold_count(kInf, s12, 2)),
              1e-10, "root of p_1(s)=p_2(s) near " + std::to_string(s12));
  }
  {
    bool ok = true;
    for (double s = 0.25; s <= 4.01; s += 0.25) {
      const double a1 = rl::eu_marginal_survival(rl::EuKind::A, 1, s);
      const double b1 = rl::eu_marginal_survival(rl::EuKind::B, 1, s);
      const double a2 = rl::eu_marginal_survival(rl::EuKind::A, 2, s);
      const double b2 = rl::eu_marginal_survival(rl::EuKind::B, 2, s);
      ok = ok && a1 < b1 && b1 < a2 && a2 < b2;
    }
    ctx.boolean("recordlaw.interlacing", "identities", ok,
                "P(A1>s)<P(B1>s)<P(A2>s)<P(B2>s)");
  }
  {
    double worst = 0.0;
    for (double s : {0.5, os::t_F(), 1.0, 2.0}) {
      const double i_inf = sf::E1(s);
      const double a1 = rl::eu_marginal_survival(rl::EuKind::A, 1, s);
      worst = std::max(worst, std::abs(a1 - (std::exp(-s) - s * i_inf)));
      const double b1 = rl::eu_marginal_survival(rl::EuKind::B, 1, s);
      worst = std::max(
          worst, std::abs(b1 - (std::exp(-s) +
                                (std::exp(s) - 1.0 - s) * i_inf)));
      const double a2 = rl::eu_marginal_survival(rl::EuKind::A, 2, s);
      worst = std::max(worst, std::abs(a2 - a1 -
                                       rl::p_threshold_count(kInf, s, 1)));
      const double js = sf::J(s).value;
      const double jneg = sf::J_negative(s);
      const double q1inf =
          -i_inf * (jneg * std::exp(s) + js + s * js) + std::exp(-s) * js;
      const double b2 = rl::eu_marginal_survival(rl::EuKind::B, 2, s);
      worst = std::max(worst, std::abs(b2 - b1 - q1inf));
    }
    ctx.resid("recordlaw.eu.closed_forms", "identities", worst, 1e-10);
  }
  {
    bool ok = true;
    for (auto kind : {rl::EuKind::A, rl::EuKind::B}) {
      for (int k : {1, 2}) {
        double prev = rl::eu_marginal_survival(kind, k, 1e-8);
        ok = ok && prev > 1.0 - 1e-6;
        for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
          const double cur = rl::eu_marginal_survival(kind, k, s);
          ok = ok && cur <= prev + 1e-12;
          prev = cur;
        }
      }
    }
    ctx.boolean("recordlaw.eu.monotone", "identities", ok);
  }
  {
    double worst = 0.0;
    for (double s : {0.5, 1.0, 2.0}) {
      for (double t : {s, 2.0, 5.0, kInf}) {
        if (t < s) continue;
        const double direct = rl::p_threshold_count(t, s, 0);
        worst = std::max(worst, std::abs(direct - (std::exp(-s) -
                                                   s * sf::I(t, s).value)));
      }
    }
    ctx.resid("recordlaw.p0.complement", "identities", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double t : {1.0, 2.0, 5.0}) {
      for (double s : {0.3 * t, 0.7 * t, t}) {
        const double total =
            rl::q_transition_low(t, s) + rl::q_transition_upper(t, s);
        worst = std::max(worst, std::abs(total - (1.0 - rl::q_absorb(t))));
      }
    }
    ctx.resid("recordlaw.q_transition.relation", "identities", worst, 1e-12);
  }
  {
    // t Q'' + (t+2) Q' + Q = 1{t<s} for Q(t) = Q(t, ]0,s]), s fixed.
    const double s = 1.5;
    const auto Q = [s](double t) {
      return t <= s ? 1.0 - rl::q_absorb(t) : rl::q_transition_low(t, s);
    };
    double worst = 0.0;
    for (double t : {0.5, 1.0, 1.4, 1.7, 3.0, 6.0}) {
      const double resid = t * fd2(Q, t, 1e-4) + (t + 2.0) * fd1(Q, t, 1e-4) +
                           Q(t) - (t < s ? 1.0 : 0.0);
      worst = std::max(worst, std::abs(resid));
    }
    ctx.resid("recordlaw.Q_transition.ode", "identities", worst, 1e-6);
  }
  {
    const double tf = os::t_F();
    double worst = std::abs(rl::first_visit_cdf_P(5.0, 1.0, 1.0));
    worst = std::max(worst, std::abs(rl::first_visit_cdf_P(5.0, 1.0, 1e-12) -
                                     (1.0 - rl::p_threshold_count(5.0, 1.0, 0))));
    for (double x : {0.2, 0.5, 0.9}) {
      const double lhs = rl::first_visit_cdf_P(1.0, 1.0, x);
      const double rhs = rl::p_transition_upper(1.0 * (1.0 + 1e-12), x);
      worst = std::max(worst, std::abs(lhs - rhs));
      if (rl::first_visit_cdf_P(5.0, 1.0, x) <
          rl::first_visit_cdf_P(5.0, 1.0, x + 0.05) - 1e-12) {
        worst = std::max(worst, 1.0);
      }
    }
    for (double t : {2.0, 5.0, kInf}) {
      const auto q = qd::integrate(
          [t, tf](double x) {
            return std::exp(-x) * rl::first_visit_density_P(t, tf, x);
          },
          1e-14, tf, 1e-10, 1e-12);
      worst = std::max(worst,
                       std::abs(q.value - rl::p_threshold_count(t, tf, 1)));
    }
    ctx.resid("recordlaw.first_visit.phi", "identities", worst, 1e-8);
  }
  {
    double worst =
        std::abs(rl::inversion_partial_sum(1, 1.0, 30) - std::exp(-1.0));
    worst = std::max(worst, std::abs(rl::inversion_partial_sum(0, 0.7, 0) -
                                     std::exp(-0.7)));
    worst = std::max(worst, std::abs(rl::inversion_partial_sum(2, 0.5, 40) -
                                     std::exp(-0.5) * 0.125));
    for (int k : {1, 2}) {
      double erlang = 1.0;
      double term = 1.0;
      for (int i = 1; i <= k; ++i) {
        term /= i;
        erlang += term;
      }
      const double ik = 1.0 - std::exp(-1.0) * erlang;
      worst = std::max(worst,
                       std::abs(rl::inversion_partial_sum_q(k, 1.0, 40) - ik));
    }
    ctx.resid("recordlaw.inversion", "identities", worst, 1e-8);
  }
  {
    double worst = 0.0;
    for (int j : {1, 2, 3}) {
      for (double s : {0.5, 1.0, 2.0, 5.0}) {
        worst = std::max(worst,
                         std::abs(rl::p_deriv(s, j) - rl::p_deriv_series(s, j)));
      }
    }
    ctx.resid("recordlaw.p_deriv.quadrature_vs_series", "identities", worst,
              1e-12);
  }
  {
    double worst = 0.0;
    for (int j : {0, 1, 2}) {
      worst = std::max(worst, std::abs(rl::q_threshold_count(2.0, 2.0, j) -
                                       rl::q_count(2.0, j)));
      worst = std::max(worst, std::abs(rl::p_threshold_count(2.0, 2.0, j) -
                                       rl::p_count(2.0, j)));
    }
    ctx.resid("recordlaw.threshold.boundary", "identities", worst, 1e-12);
  }
}

void check_optstop(Ctx& ctx) {
  {
    const auto sol = os::solve_tF();
    ctx.resid("optstop.tF.value", "identities", std::abs(sol.root - 0.804352),
              1e-5);
    ctx.resid("optstop.tF.residual", "identities",
              std::abs(sol.defining_residual), 1e-12);
    ctx.resid("optstop.tF.p0_equals_p1", "identities",
              std::abs(rl::p_count(sol.root, 0) - rl::p_count(sol.root, 1)),
              1e-10);
    const auto p1 = [](double x) { return rl::p_count(x, 1); };
    const double resid = sol.root * fd2(p1, sol.root, 1e-4) +
                         (sol.root + 1.0) * fd1(p1, sol.root, 1e-4);
    ctx.resid("optstop.tF.switch_ode", "identities", std::abs(resid), 1e-6,
              "t p1'' + (t+1) p1' = 0 at t_F");
  }
  {
    const auto sol = os::solve_tP();
    ctx.resid("optstop.tP.value", "identities", std::abs(sol.root - 2.11982),
              1e-5);
    const double t = sol.root;
    double worst = std::abs(rl::q_count(t, 0) - rl::q_count(t, 1));
    worst = std::max(worst, std::abs(-sf::J_negative(t) -
                                     std::exp(-t) * sf::J(t).value -
                                     (1.0 - std::exp(-t))));
    // Third equivalent form, p_1 - p_0 = -1 - J(-t).
    worst = std::max(worst, std::abs(rl::p_count(t, 1) - rl::p_count(t, 0) -
                                     (-1.0 - sf::J_negative(t))));
    // Double series sum_{j>=2} (1/j) sum_{k>=j+1} t^{k-1}/k! = 1, swapped to
    // a single series in k.
    double dbl = 0.0;
    double tk = 1.0;  // t^{k-1}/k! at k = 1
    for (int k = 1; k <= 80; ++k) {
      if (k >= 3) dbl += tk * (sf::harmonic(k - 1) - 1.0);
      tk *= t / (k + 1);
    }
    worst = std::max(worst, std::abs(dbl - 1.0));
    ctx.resid("optstop.tP.four_equations", "identities", worst, 1e-8);
    const auto q1 = [](double x) { return rl::q_count(x, 1); };
    const double nocorner = t * fd2(q1, t, 1e-4) +
                            (t + 2.0) * fd1(q1, t, 1e-4) -
                            (rl::q_count(t, 0) - rl::q_count(t, 1));
    ctx.resid("optstop.tP.no_corner_ode", "identities", std::abs(nocorner),
              1e-6, "t q1'' + (t+2) q1' = q0 - q1 at t_P");
  }
  {
    ctx.resid("optstop.vF.value", "identities",
              std::abs(os::value_FI(kInf) - 0.580164), 1e-5);
    double worst = std::abs(os::value_FI(0.0));
    worst = std::max(worst,
                     std::abs(os::value_FI(0.5) - rl::p_count(0.5, 1)));
    ctx.resid("optstop.vF.small_t", "identities", worst, 1e-13,
              "v(t) = p_1(t) for t <= t_F");
  }
  {
    const auto g = os::greedy_optimum();
    ctx.resid("optstop.greedy.location", "identities",
              std::abs(g.t_star - 1.50286), 1e-4);
    ctx.resid("optstop.greedy.value", "identities", std::abs(g.value - 0.51735),
              1e-4);
    ctx.resid("optstop.greedy.stationarity", "identities",
              std::abs(rl::p_deriv(g.t_star, 1)), 1e-8);
  }
  {
    bool ok = true;
    double prev = -1.0;
    for (double t : {0.1, 0.25, 0.5, 0.804, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0,
                     kInf}) {
      const double v = os::value_FI(t);
      ok = ok && v >= prev - 1e-13;
      prev = v;
      if (t > os::t_F() && t != kInf) ok = ok && v > rl::p_count(t, 0);
      if (t <= os::t_F())
        ok = ok && std::abs(v - rl::p_count(t, 1)) < 1e-12;
    }
    ctx.boolean("optstop.vFI.monotone", "identities", ok);
  }
  {
    bool ok = true;
    const double vf = os::value_FI(kInf);
    for (double s : {0.5, 0.7, 0.9, 1.1, 1.5}) {
      ok = ok && rl::p_threshold_count(kInf, s, 1) <= vf + 1e-12;
    }
    const double vp = os::value_VC(kInf);
    for (double s : {1.5, 1.8, 2.0, 2.4, 3.0}) {
      ok = ok && rl::q_threshold_count(kInf, s, 1) <= vp + 1e-12;
    }
    ctx.boolean("optstop.threshold.optimality", "identities", ok,
                "pi_{t_F}, pi_{t_P} maximize over the threshold grid");
  }
  {
    double worst = 0.0;
    for (int j : {1, 2, 3, 4}) {
      const auto vals = os::poisson_digression(j);
      const double target = std::exp(
          j * std::log(static_cast<double>(j)) - j - std::lgamma(j + 1.0));
      for (double v : vals) worst = std::max(worst, std::abs(v - target));
    }
    ctx.resid("optstop.poisson_digression", "identities", worst, 1e-12,
              "all coincident values equal e^{-j} j^j / j!");
  }
  {
    const double s = 1.0, xi = 0.4;
    const double cut = s / (1.0 - xi);
    double worst =
        std::abs(os::stop_time_cdf(s - 1e-9, xi, s) -
                 os::stop_time_cdf(s + 1e-9, xi, s));
    worst = std::max(worst, std::abs(os::stop_time_cdf(cut - 1e-9, xi, s) -
                                     os::stop_time_cdf(cut + 1e-9, xi, s)));
    worst = std::max(worst, std::abs(os::stop_time_cdf(kInf, xi, s) -
                                     os::stop_time_cdf(cut, xi, s)));
    ctx.resid("optstop.stoptime.continuity", "identities", worst, 1e-8);
    const auto f_t = [xi, s](double t) { return os::stop_time_cdf(t, xi, s); };
    ctx.resid("optstop.stoptime.flat_beyond_cut", "identities",
              std::abs(fd1(f_t, 2.0 * cut, 1e-4)), 1e-8,
              "d/dt f = 0 for t > s/(1-xi)");
    bool mono = true;
    double prev = -1.0;
    for (double x = 0.0; x < 0.999; x += 0.05) {
      const double v = os::stop_time_cdf(3.0, x, s);
      mono = mono && v >= prev - 1e-13;
      prev = v;
    }
    for (double t : {0.2, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      mono = mono && os::stop_time_cdf(t, xi, s) <=
                         os::stop_time_cdf(t + 0.1, xi, s) + 1e-13;
    }
    ctx.boolean("optstop.stoptime.monotone", "identities", mono);
    const double lim = os::stop_time_cdf(kInf, 1.0 - 1e-8, s);
    ctx.resid("optstop.stoptime.xi_to_1", "identities",
              std::abs(lim - (1.0 - std::exp(-s) + s * sf::E1(s))), 1e-6,
              "f(inf,1-,s) = 1 - p_0(inf,s)");
  }
  {
    double worst = 0.0;
    for (double s : {os::t_F(), 1.0}) {
      const auto q = qd::integrate(
          [s](double x) { return os::win_rate_density(x, s); }, 0.0, 1.0,
          1e-9, 1e-9);
      worst = std::max(worst,
                       std::abs(q.value - rl::p_threshold_count(kInf, s, 1)));
    }
    ctx.resid("optstop.winrate.integral", "identities", worst, 1e-6);
    const double s = os::t_F();
    double endpoints =
        std::abs(os::win_rate_density(1e-5, s) + std::expm1(-s));
    endpoints = std::max(endpoints, std::abs(os::win_rate_density(1.0 - 1e-5, s) -
                                             std::exp(-s)));
    ctx.resid("optstop.winrate.endpoints", "identities", endpoints, 1e-4,
              "limits 1-e^{-s} at 0 and e^{-s} at 1");
    bool finite = true;
    for (double x = 0.0; x <= 1.0001; x += 0.01) {
      finite = finite && std::isfinite(os::win_rate_density(std::min(x, 1.0), s));
    }
    ctx.boolean("optstop.winrate.finite", "identities", finite);
  }
  {
    const double worst =
        std::abs(os::duration_value(1.0, 2.0) - rl::q_count(1.0, 1));
    ctx.resid("optstop.duration.boundary", "identities", worst, 1e-13,
              "reward t q_1(t) when t <= s");
    const double at_tp = os::duration_value(10.0, os::t_P());
    const bool opt = at_tp >= os::duration_value(10.0, 0.5 * os::t_P()) &&
                     at_tp >= os::duration_value(10.0, 2.0 * os::t_P());
    ctx.boolean("optstop.duration.optimal_at_tP", "identities", opt);
    bool same = true;
    for (double t : {0.5, 2.0, 10.0, kInf}) {
      same = same && os::value_HC(t) == os::value_VC(t);
    }
    ctx.boolean("optstop.hc_equals_vc", "identities", same,
                "shared implementation, exact");
  }
}

// ------------------------------------------------------------------ MC suite

void check_mc(Ctx& ctx) {
  using sim::EuKind;
  using sim::Problem;
  const std::uint64_t seed = ctx.seed;
  const unsigned workers = ctx.workers;

  {
    const auto est = parallel::mc_mean(
        1000000, seed + 1, workers, [](rng::Stream& rng, std::uint64_t) {
          return static_cast<double>(
              sim::sample_ppp_rect(2.0, 1.0, rng).size());
        });
    ctx.sigma("mc.ppp.mean_count", "mc", z_score(est, 2.0));
  }
  {
    const auto est = parallel::mc_mean(
        1000000, seed + 2, workers, [](rng::Stream& rng, std::uint64_t) {
          return sim::sample_ppp_rect(1.0, 1.0, rng).empty() ? 1.0 : 0.0;
        });
    ctx.sigma("mc.ppp.empty_fraction", "mc", z_score(est, std::exp(-1.0)));
  }
  {
    double worst_p = 1.0;
    for (double t : {0.5, 1.0, 2.0, 5.0}) {
      const int cells = 9;
      const std::uint64_t n = 1000000;
      const auto counts = parallel::mc_bincount(
          n, seed + 3, workers, cells, [t, cells](rng::Stream& rng, std::uint64_t) {
            const auto atoms = sim::sample_ppp_rect(t, t, rng);
            const auto rec = sim::extract_records(atoms, t, 1.0);
            return std::min<int>(static_cast<int>(rec.records.size()),
                                 cells - 1);
          });
      std::vector<double> obs, expd;
      double tail = 1.0;
      for (int j = 0; j < cells; ++j) {
        obs.push_back(static_cast<double>(counts[j]));
        const double pj = (j < cells - 1) ? rl::p_count(t, j) : tail;
        expd.push_back(pj * static_cast<double>(n));
        if (j < cells - 1) tail -= pj;
      }
      worst_p = std::min(worst_p, stats::chi2_gof(obs, expd).p_value);
    }
    ctx.pvalue("mc.records.chi2", "mc", worst_p, 0.001);
  }
  {
    double worst_p = 1.0;
    for (double t : {1.0, 2.0, 5.0}) {
      const int cells = 9;
      const std::uint64_t n = 1000000;
      const auto counts = parallel::mc_bincount(
          n, seed + 4, workers, cells, [t, cells](rng::Stream& rng, std::uint64_t) {
            auto atoms = sim::sample_ppp_rect(t, t, rng);
            const double cut = t * rng.uniform();
            std::erase_if(atoms,
                          [cut](const sim::Atom& a) { return a.x >= cut; });
            const auto rec = sim::extract_records(atoms, t, 1.0);
            return std::min<int>(static_cast<int>(rec.records.size()),
                                 cells - 1);
          });
      std::vector<double> obs, expd;
      double tail = 1.0;
      for (int j = 0; j < cells; ++j) {
        obs.push_back(static_cast<double>(counts[j]));
        const double pj = (j < cells - 1) ? rl::q_count(t, j) : tail;
        expd.push_back(pj * static_cast<double>(n));
        if (j < cells - 1) tail -= pj;
      }
      worst_p = std::min(worst_p, stats::chi2_gof(obs, expd).p_value);
    }
    ctx.pvalue("mc.vc_records.chi2", "mc", worst_p, 0.001);
  }
  {
    const double t = 3.0, s = 1.0;
    const int cells = 6;
    const std::uint64_t n = 1000000;
    const auto counts = parallel::mc_bincount(
        n, seed + 5, workers, cells,
        [t, s, cells](rng::Stream& rng, std::uint64_t) {
          const auto path = sim::sample_P_chain(t, rng);
          int visits = 0;
          for (double x : path.states) {
            if (x > 0.0 && x <= s) ++visits;
          }
          return std::min(visits, cells - 1);
        });
    double worst = 0.0;
    for (int j = 0; j < cells - 1; ++j) {
      const double pj = rl::p_threshold_count(t, s, j);
      const double freq = static_cast<double>(counts[j]) / n;
      const double se = std::sqrt(pj * (1.0 - pj) / n);
      worst = std::max(worst, std::abs(freq - pj) / se);
    }
    ctx.sigma("mc.p_chain.visit_counts", "mc", worst);
    // Partial sums give the finite-t law of the k-th box area from the top:
    // P(A_{kt} > s) = sum_{j<k} p_j(t,s).
    double worst_cdf = 0.0;
    for (int k : {1, 2, 3}) {
      double target = 0.0;
      for (int j = 0; j < k; ++j) target += rl::p_threshold_count(t, s, j);
      std::uint64_t below = 0;
      for (int j = 0; j < k; ++j) below += counts[j];
      const double freq = static_cast<double>(below) / n;
      const double se = std::sqrt(target * (1.0 - target) / n);
      worst_cdf = std::max(worst_cdf, std::abs(freq - target) / se);
    }
    ctx.sigma("mc.count_cdf.consistency", "mc", worst_cdf, 4.0,
              "P(A_kt > s) as a visit-count partial sum, k = 1..3");
  }
  {
    const std::uint64_t n = 1000000;
    const auto est = parallel::mc_mean(
        n, seed + 6, workers, [](rng::Stream& rng, std::uint64_t) {
          const auto path = sim::sample_Q_chain(2.0, rng);
          return path.states.size() == 1 ? 1.0 : 0.0;  // absorbed first step
        });
    ctx.sigma("mc.q_chain.absorption", "mc", z_score(est, rl::q_count(2.0, 0)));
  }
  {
    const std::uint64_t n = 100000;
    auto chain = parallel::mc_collect(
        n, seed + 7, workers, [](rng::Stream& rng, std::uint64_t) {
          return sim::sample_P_chain(2.0, rng).states.front();
        });
    auto boxes = parallel::mc_collect(
        n, seed + 8, workers, [](rng::Stream& rng, std::uint64_t) {
          const auto atoms = sim::sample_ppp_rect(2.0, 2.0, rng);
          const auto rec = sim::extract_records(atoms, 2.0, 1.0);
          return rec.box_areas.empty() ? 0.0 : rec.box_areas.front();
        });
    std::erase(chain, 0.0);
    std::erase(boxes, 0.0);
    ctx.pvalue("mc.box_areas.match_p_chain", "mc",
               stats::ks_two_sample(chain, boxes).p_value, 0.01,
               "first visited state vs first record box area");
  }
  {
    const std::uint64_t n = 100000;
    auto corange = parallel::mc_collect(
        n, seed + 9, workers, [](rng::Stream& rng, std::uint64_t) {
          return sim::sample_corange_chain(2.0, rng).states.front();
        });
    auto qfirst = parallel::mc_collect(
        n, seed + 10, workers, [](rng::Stream& rng, std::uint64_t) {
          return sim::sample_Q_chain(2.0, rng).states.front();
        });
    std::erase(corange, 0.0);
    std::erase(qfirst, 0.0);
    ctx.pvalue("mc.corange.first_step_vs_q", "mc",
               stats::ks_two_sample(corange, qfirst).p_value, 0.01);
  }
  {
    double worst_p = 1.0;
    for (int k : {1, 2}) {
      auto samples = parallel::mc_collect(
          100000, seed + 11 + k, workers,
          [k](rng::Stream& rng, std::uint64_t) {
            return sim::sample_eu(EuKind::A, k, rng);
          });
      const auto cdf = [k](double x) {
        return x <= 0.0 ? 0.0
                        : 1.0 - rl::eu_marginal_survival(rl::EuKind::A, k, x);
      };
      worst_p = std::min(worst_p,
                         stats::ks_one_sample(std::move(samples), cdf).p_value);
    }
    ctx.pvalue("mc.eu.A_marginals", "mc", worst_p, 0.01);
  }
  {
    double worst_p = 1.0;
    for (int k : {1, 2}) {
      auto samples = parallel::mc_collect(
          100000, seed + 13 + k, workers,
          [k](rng::Stream& rng, std::uint64_t) {
            return sim::sample_eu(EuKind::B, k, rng);
          });
      const auto cdf = [k](double x) {
        return x <= 0.0 ? 0.0
                        : 1.0 - rl::eu_marginal_survival(rl::EuKind::B, k, x);
      };
      worst_p = std::min(worst_p,
                         stats::ks_one_sample(std::move(samples), cdf).p_value);
    }
    ctx.pvalue("mc.eu.B_marginals", "mc", worst_p, 0.01);
  }
  {
    double worst_p = 1.0;
    for (int k : {1, 2}) {
      auto b = parallel::mc_collect(100000, seed + 15 + k, workers,
                                    [k](rng::Stream& rng, std::uint64_t) {
                                      return sim::sample_eu(EuKind::B, k, rng);
                                    });
      auto c = parallel::mc_collect(100000, seed + 17 + k, workers,
                                    [k](rng::Stream& rng, std::uint64_t) {
                                      return sim::sample_eu(EuKind::C, k, rng);
                                    });
      worst_p = std::min(
          worst_p, stats::ks_two_sample(std::move(b), std::move(c)).p_value);
    }
    ctx.pvalue("mc.eu.B_matches_C", "mc", worst_p, 0.01);
  }
  {
    const double u1 = 0.5, u2 = 0.7;
    const auto est = parallel::mc_mean_multi<3>(
        1000000, seed + 19, workers,
        [u1, u2](rng::Stream& rng, std::uint64_t) {
          const double x =
              rng.exponential() / u1 +
              (rng.uniform() > u2 ? rng.exponential() / (u1 * u2) : 0.0);
          return std::array<double, 3>{x, x * x, x * x * x};
        });
    double worst = 0.0;
    double fact = 1.0;
    for (int m = 1; m <= 3; ++m) {
      fact *= m;
      worst = std::max(worst,
                       z_score(est[m - 1], fact / std::pow(u1 * u2, m)));
    }
    ctx.sigma("mc.lemma.exponential_moments", "mc", worst,
              4.0, "E/u1 + E'/(u1 u2) 1{V>u2} has the moments of E/(u1 u2)");
  }
  {
    const double t = 5.0;
    double worst_p = 1.0;
    for (int k : {1, 2}) {
      auto eu = parallel::mc_collect(
          100000, seed + 20 + k, workers,
          [k, t](rng::Stream& rng, std::uint64_t) {
            while (true) {
              double depth = 0.0, prod = 1.0, area = 0.0;
              bool ok = true;
              for (int i = 1; i <= k; ++i) {
                depth += rng.exponential() / prod;
                if (depth >= t) {
                  ok = false;
                  break;
                }
                prod *= rng.uniform_pos();
                area = depth * (1.0 - prod);
              }
              if (ok) return area;
            }
          });
      auto ppp = parallel::mc_collect(
          100000, seed + 22 + k, workers,
          [k, t](rng::Stream& rng, std::uint64_t) {
            while (true) {
              const auto atoms = sim::sample_ppp_rect(t, t, rng);
              auto rec = sim::extract_records(atoms, t, 1.0);
              if (static_cast<int>(rec.records.size()) < k) continue;
              return rec.box_areas[rec.box_areas.size() - k];
            }
          });
      worst_p = std::min(
          worst_p, stats::ks_two_sample(std::move(eu), std::move(ppp)).p_value);
    }
    ctx.pvalue("mc.eu.truncation_consistency", "mc", worst_p, 0.01,
               "EU samples given depth<t vs k-th record box from the top");
  }
  {
    const auto est = sim::mc_policy_success(Problem::FI, 30.0, os::t_F(),
                                            1000000, seed + 25, workers);
    ctx.sigma("mc.policy.fi_t30", "mc", z_score(est, os::value_FI(30.0)));
  }
  {
    const auto vc = sim::mc_policy_success(Problem::VC, 10.0, os::t_P(),
                                           1000000, seed + 26, workers);
    const auto hc = sim::mc_policy_success(Problem::HC, 10.0, os::t_P(),
                                           1000000, seed + 27, workers);
    const double u10 = os::value_VC(10.0);
    double worst = std::max(z_score(vc, u10), z_score(hc, u10));
    const double joint_se = std::hypot(vc.std_error, hc.std_error);
    worst = std::max(worst, std::abs(vc.mean - hc.mean) / joint_se);
    ctx.sigma("mc.policy.vc_equals_hc_t10", "mc", worst);
  }
  {
    const auto est = sim::mc_policy_success(Problem::FI, kInf, os::t_F(),
                                            1000000, seed + 28, workers);
    ctx.sigma("mc.policy.fi_infinite", "mc", z_score(est, os::value_FI(kInf)));
  }
  {
    const auto est = sim::mc_policy_success(Problem::VC, kInf, os::t_P(),
                                            1000000, seed + 29, workers);
    ctx.sigma("mc.policy.vc_infinite", "mc", z_score(est, os::value_VC(kInf)));
  }
  {
    const auto est = sim::mc_policy_success(Problem::FI, 5.0, 1e-9, 10000,
                                            seed + 30, workers);
    ctx.resid("mc.policy.vanishing_threshold", "mc", est.mean, 0.0,
              "pi_s never stops as s -> 0");
  }
  {
    const auto est = sim::mc_policy_success(Problem::BinPack, 30.0, os::t_F(),
                                            1000000, seed + 31, workers);
    ctx.sigma("mc.policy.binpack_t30", "mc", z_score(est, os::value_FI(30.0)));
  }
  {
    const auto r5 =
        sim::mc_policy_reward(5.0, 1.0, 1000000, seed + 32, workers);
    const auto r10 =
        sim::mc_policy_reward(10.0, os::t_P(), 1000000, seed + 33, workers);
    const double worst =
        std::max(z_score(r5, os::duration_value(5.0, 1.0)),
                 z_score(r10, os::duration_value(10.0, os::t_P())));
    ctx.sigma("mc.policy.duration", "mc", worst);
  }
  {
    const double t = 25.0;
    const auto hv = sim::mc_horver(t, 1000000, seed + 34, workers);
    const double expected =
        qd::integrate(
            [](double a) { return rl::q_threshold_count(a, os::t_P(), 1); },
            1e-12, t, 1e-10, 1e-10)
            .value /
        t;
    const double worst =
        std::max(z_score(hv.hor, expected), z_score(hv.ver, expected));
    ctx.sigma("mc.horver.square_t25", "mc", worst, 4.0,
              "target (1/t) int q_1(a,t_P) da");
    ctx.boolean("mc.horver.generic_disagreement", "mc", hv.disagree.mean > 0.0,
                "observers generically stop at different atoms");
    const auto far = sim::mc_horver(100.0, 200000, seed + 35, workers);
    const double vp = os::value_VC(kInf);
    const double tol = 0.01 + 4.0 * far.hor.std_error;
    ctx.resid("mc.horver.approaches_vP", "mc",
              std::max(std::abs(far.hor.mean - vp),
                       std::abs(far.ver.mean - vp)),
              tol, "t = 100");
  }
  {
    const double s = os::t_F();
    auto xs = parallel::mc_collect(
        1000000, seed + 36, workers, [s](rng::Stream& rng, std::uint64_t) {
          const auto out = sim::run_policy(Problem::FI, kInf, s, rng);
          return out.stopped ? out.stop_x : 2.0;
        });
    double worst = 0.0;
    for (double xi = 0.1; xi < 0.95; xi += 0.1) {
      const double target = os::stop_time_cdf(kInf, xi, s);
      const double freq =
          static_cast<double>(std::count_if(
              xs.begin(), xs.end(), [xi](double x) { return x < xi; })) /
          static_cast<double>(xs.size());
      const double se = std::sqrt(target * (1.0 - target) / xs.size());
      worst = std::max(worst, std::abs(freq - target) / se);
    }
    ctx.sigma("mc.stoptime.quantiles", "mc", worst);
  }
  {
    // Finite-t branches: the policy run on a rectangle of area t stops left
    // of xi (rectangle coordinates rescaled to unit width).
    const double s = 1.0;
    double worst = 0.0;
    int idx = 0;
    for (const auto& [t, xi] : {std::pair{0.5, 0.3}, {1.6, 0.5}, {5.0, 0.5}}) {
      const auto est = parallel::mc_mean(
          1000000, seed + 37 + idx++, workers,
          [s, t = t, xi = xi](rng::Stream& rng, std::uint64_t) {
            const auto out = sim::run_policy(Problem::FI, t, s, rng);
            return out.stopped && out.stop_x < xi * t ? 1.0 : 0.0;
          });
      worst = std::max(worst, z_score(est, os::stop_time_cdf(t, xi, s)));
    }
    ctx.sigma("mc.stoptime.finite_area", "mc", worst);
  }
  {
    const double s = os::t_F();
    const int bins = 20;
    const std::uint64_t n = 1000000;
    const auto counts = parallel::mc_bincount(
        n, seed + 38, workers, bins,
        [s, bins](rng::Stream& rng, std::uint64_t) {
          const auto out = sim::run_policy(Problem::FI, kInf, s, rng);
          if (!out.success) return -1;
          return std::min(bins - 1, static_cast<int>(out.stop_x * bins));
        });
    double worst = 0.0;
    for (int b = 0; b < bins; ++b) {
      const double lo = static_cast<double>(b) / bins;
      const double hi = static_cast<double>(b + 1) / bins;
      const double prob =
          qd::integrate([s](double x) { return os::win_rate_density(x, s); },
                        lo, hi, 1e-10, 1e-10)
              .value;
      const double se = std::sqrt(prob * (1.0 - prob) / n);
      worst = std::max(
          worst, std::abs(static_cast<double>(counts[b]) / n - prob) / se);
    }
    ctx.sigma("mc.winrate.binned", "mc", worst);
  }
  {
    const double s = os::t_F();
    const auto d = sim::decompose_p1(s, 1000000, seed + 39, workers);
    const double part1 = (std::exp(s) - 1.0) * sf::E1(s);
    const double part2 = (std::exp(-s) - s * sf::E1(s)) * sf::J(s).value;
    double worst = std::max(z_score(d.part1, part1), z_score(d.part2, part2));
    worst = std::max(worst, z_score(d.total, os::value_FI(kInf)));
    ctx.sigma("mc.decomposition.samuels", "mc", worst);
    const auto small = sim::decompose_p1(1e-6, 50000, seed + 40, workers);
    ctx.resid("mc.decomposition.vanishing_s", "mc",
              small.part1.mean + small.part2.mean, 1e-4,
              "both parts vanish as s -> 0");
  }
  {
    const auto a = sim::mc_policy_success(Problem::FI, 5.0, os::t_F(), 20000,
                                          seed + 41, 1);
    const auto b = sim::mc_policy_success(Problem::FI, 5.0, os::t_F(), 20000,
                                          seed + 41, 2);
    const auto c = sim::mc_policy_success(Problem::FI, 5.0, os::t_F(), 20000,
                                          seed + 41, workers);
    const double worst =
        std::max(std::abs(a.mean - b.mean), std::abs(a.mean - c.mean));
    ctx.resid("mc.determinism.worker_count", "mc", worst, 0.0,
              "identical estimates for 1, 2, N workers");
  }
  {
    rng::Stream r1(seed + 42, 0), r2(seed + 42, 1);
    std::vector<double> u1(10000), u2(10000), ex(10000);
    for (auto& v : u1) v = r1.uniform();
    for (auto& v : u2) v = r2.uniform();
    for (auto& v : ex) v = r2.exponential();
    const auto same = stats::ks_two_sample(u1, u1);
    const bool ok_same = same.statistic == 0.0 && same.p_value == 1.0;
    const auto null_case = stats::ks_two_sample(u1, u2);
    const auto alt_case = stats::ks_two_sample(u1, ex);
    ctx.boolean("stats.ks.self_test", "mc",
                ok_same && null_case.p_value > 0.01 && alt_case.p_value < 1e-6,
                "identical, null and alternative cases");
  }
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& suite,
                                    std::uint64_t seed, unsigned workers) {
  Ctx ctx{seed, workers == 0 ? parallel::default_workers() : workers, {}};
  const bool identities = suite == "all" || suite == "identities";
  const bool mc = suite == "all" || suite == "mc";
  if (identities) {
    check_specfun(ctx);
    check_recordlaw(ctx);
    check_optstop(ctx);
  }
  if (mc) check_mc(ctx);
  return std::move(ctx.results);
}

}  // namespace reccalc::verify
