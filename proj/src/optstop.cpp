#include "reccalc/optstop.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "reccalc/recordlaw.hpp"
#include "reccalc/specfun.hpp"

namespace reccalc::optstop {

namespace sf = reccalc::specfun;
namespace rl = reccalc::recordlaw;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection to ~1e-6 then Newton polish to machine residual.
double bisect_newton(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double lo,
                     double hi) {
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::runtime_error("bisect_newton: root not bracketed");
  }
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 30; ++it) {
    const double fx = f(x);
    const double dfx = df(x);
    if (dfx == 0.0) break;
    const double step = fx / dfx;
    x -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

}  // namespace

ThresholdSolution solve_tF() {
  const auto f = [](double t) { return sf::J(t).value - 1.0; };
  const auto df = [](double t) { return std::expm1(t) / t; };
  const double root = bisect_newton(f, df, 0.5, 1.5);
  return {"t_F", root, f(root), {0.5, 1.5}};
}

ThresholdSolution solve_tP() {
  const auto f = [](double t) { return rl::q_count(t, 0) - rl::q_count(t, 1); };
  const auto df = [](double t) {
    return rl::q_deriv(t, 0) - rl::q_deriv(t, 1);
  };
  const double root = bisect_newton(f, df, 1.5, 3.0);
  return {"t_P", root, f(root), {1.5, 3.0}};
}

double t_F() {
  static const double value = solve_tF().root;
  return value;
}

double t_P() {
  static const double value = solve_tP().root;
  return value;
}

double value_FI(double t) {
  if (std::isnan(t) || t < 0.0) throw std::domain_error("value_FI: requires t >= 0");
  if (t == 0.0) return 0.0;
  return rl::p_threshold_count(t, t_F(), 1);
}

double value_VC(double t) {
  if (std::isnan(t) || t < 0.0) throw std::domain_error("value_VC: requires t >= 0");
  if (t == 0.0) return 0.0;
  return rl::q_threshold_count(t, t_P(), 1);
}

double value_HC(double t) { return value_VC(t); }

GreedyOptimum greedy_optimum() {
  // p_1'(t) = e^{-t}/t (e^t - 1 - t J(t)); the bracketed factor, written in
  // the scaled form 1 - e^{-t} - t e^{-t} J(t), has a single sign change.
  const auto f = [](double t) {
    return 1.0 - std::exp(-t) - t * sf::exp_scaled_J(t);
  };
  const auto df = [&](double t) {
    return -f(t) + std::exp(-t) * (1.0 - sf::J(t).value);
  };
  const double root = bisect_newton(f, df, 1.0, 2.0);
  return {root, rl::p_count(root, 1)};
}

double duration_value(double t, double s) {
  if (!(t > 0.0) || t == kInf) {
    throw std::domain_error("duration_value: requires finite t > 0");
  }
  if (!(s > 0.0)) throw std::domain_error("duration_value: requires s > 0");
  return t * rl::q_threshold_count(t, s, 1);
}

std::vector<double> poisson_digression(int j) {
  if (j < 1) throw std::domain_error("poisson_digression: requires j >= 1");
  // Ordinary Poisson process: p_k(s) = e^{-s} s^k/k!, counts left of the cut
  // q_k(inf,s) = e^{-s} s^{k+1}/(k+1)!.  Evaluated at s = j.
  const double s = j;
  const auto pois = [s](int k) {
    return std::exp(k * std::log(s) - s - std::lgamma(k + 1.0));
  };
  std::vector<double> out;
  out.push_back(pois(j));          // p_j(inf, j)
  out.push_back(pois(j - 1));      // p_{j-1}(inf, j)
  out.push_back(pois((j - 1) + 1));  // q_{j-1}(inf, j) = e^{-s} s^j / j!
  if (j >= 2) out.push_back(pois((j - 2) + 1));  // q_{j-2}(inf, j)
  return out;
}

double stop_time_cdf(double t, double xi, double s) {
  if (!(s > 0.0)) throw std::domain_error("stop_time_cdf: requires s > 0");
  if (!(xi >= 0.0 && xi < 1.0)) {
    throw std::domain_error("stop_time_cdf: requires xi in [0,1)");
  }
  if (std::isnan(t) || t < 0.0) throw std::domain_error("stop_time_cdf: requires t >= 0");
  if (xi == 0.0) return 0.0;
  if (t <= s) return -std::expm1(-t * xi);
  // For t in [s, s/(1-xi)]: f = f(s) + int_s^t (xi + s/u - 1) e^{-xi u} du;
  // beyond s/(1-xi) the distribution no longer depends on t.
  const double cut = s / (1.0 - xi);
  const double tau = std::min(t, cut);
  const double base = -std::expm1(-s * xi);
  const double lin =
      (xi - 1.0) / xi * (std::exp(-xi * s) - std::exp(-xi * tau));
  const double intpart = s * sf::I(xi * tau, xi * s).value;
  return base + lin + intpart;
}

double win_rate_density(double xi, double s) {
  if (!(s > 0.0) || s == kInf) {
    throw std::domain_error("win_rate_density: requires finite s > 0");
  }
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw std::domain_error("win_rate_density: requires xi in [0,1]");
  }
  // Removable singularities at the endpoints; return the analytic limits.
  if (xi < 1e-7) return -std::expm1(-s);
  if (1.0 - xi < 1e-7) return std::exp(-s);
  const double om = 1.0 - xi;
  return -std::exp(-s) + (std::exp(-s * xi) - xi * std::exp(-s)) / om +
         (std::exp(-s * xi) - std::exp(-s * xi / om)) / xi -
         s / om *
             (sf::I(s * xi / om, s * xi).value - sf::I(s / om, s).value);
}

ValueCurve value_curve(const std::string& problem, std::vector<double> t_grid) {
  std::function<double(double)> eval;
  if (problem == "fi") {
    eval = value_FI;
  } else if (problem == "vc" || problem == "hc") {
    eval = value_VC;
  } else if (problem == "duration") {
    eval = [](double t) { return duration_value(t, t_P()); };
  } else if (problem == "greedy") {
    eval = [](double t) { return rl::p_count(t, 1); };
  } else {
    throw std::invalid_argument("value_curve: unknown problem " + problem);
  }
  ValueCurve out;
  out.problem = problem;
  out.t_grid = std::move(t_grid);
  out.values.reserve(out.t_grid.size());
  for (double t : out.t_grid) out.values.push_back(eval(t));
  return out;
}

}  // namespace reccalc::optstop
