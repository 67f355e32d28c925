#include "reccalc/recordlaw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "reccalc/quadrature.hpp"
#include "reccalc/specfun.hpp"

namespace reccalc::recordlaw {

namespace sf = reccalc::specfun;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTailTol = 1e-12;

// Records are never more numerous than atoms, so the mass of {count > J}
// is bounded by the Poisson(t) tail beyond J.
double poisson_tail_bound(double t, int j_max) {
  double w = std::exp(-t);  // e^{-t} t^k / k!
  for (int k = 1; k <= j_max + 1; ++k) w *= t / k;
  const double rho = t / (j_max + 2);
  if (rho >= 0.9) return kInf;
  return w / (1.0 - rho);
}

void check_count_args(double t, int j) {
  if (j < 0) throw std::domain_error("count: requires j >= 0");
  if (std::isnan(t) || t < 0.0) throw std::domain_error("count: requires t >= 0");
}

double p_series_impl(double t, int j) {
  const auto& s1 = sf::stirling_first();
  if (j > s1.max_index()) {
    throw sf::PrecisionError("p_count: j beyond Stirling table");
  }
  double w = std::exp(-t);  // e^{-t} t^k / k!
  double sum = 0.0;
  for (int k = 0; k <= s1.max_index(); ++k) {
    if (k >= j) sum += w * s1.ratio(k, j);
    w *= t / (k + 1);
  }
  return sum;
}

double q_series_impl(double t, int j) {
  const auto& s1 = sf::stirling_first();
  if (j > s1.max_index()) {
    throw sf::PrecisionError("q_count: j beyond Stirling table");
  }
  // q_j(t) = e^{-t} sum_k t^k/(k+1)! sum_{i<=k} sigma1(i,j)/i!
  double w = std::exp(-t);  // e^{-t} t^k / (k+1)!
  double sum = 0.0;
  for (int k = 0; k <= s1.max_index(); ++k) {
    sum += w * s1.ratio_prefix(k, j);
    w *= t / (k + 2);
  }
  return sum;
}

void require_series_certified(double t, const char* who) {
  if (t > 60.0 || poisson_tail_bound(t, sf::kStirlingMax) > kTailTol) {
    throw sf::PrecisionError(std::string(who) +
                             ": tail bound not certifiable within table");
  }
}

// a_j(s) = s p_j'(s) = integral_0^s e^{x-s} (p_{j-1}(x) - p_j(x)) dx.
// The damped integrand keeps the value bounded for large s; mass further
// than 50 units below s is negligible (< e^{-50}).
double threshold_coeff(double s, int j) {
  if (j == 0) return -s * std::exp(-s);
  const double lo = std::max(0.0, s - 50.0);
  const auto res = quadrature::integrate(
      [s, j](double x) {
        return std::exp(x - s) * (p_count(x, j - 1) - p_count(x, j));
      },
      lo, s, 1e-14, 1e-12);
  return res.value;
}

}  // namespace

double p_count(double t, int j) {
  check_count_args(t, j);
  if (t == kInf) return 0.0;
  if (j == 0) return std::exp(-t);
  if (j == 1) return sf::exp_scaled_J(t);
  if (t == 0.0) return 0.0;
  require_series_certified(t, "p_count");
  return p_series_impl(t, j);
}

double q_count(double t, int j) {
  check_count_args(t, j);
  if (t == kInf) return 0.0;
  if (j == 0) return t == 0.0 ? 1.0 : -std::expm1(-t) / t;
  if (t == 0.0) return 0.0;
  if (j == 1) return (-sf::J_negative(t) - sf::exp_scaled_J(t)) / t;
  require_series_certified(t, "q_count");
  return q_series_impl(t, j);
}

double p_count_series(double t, int j) {
  if (j < 0) throw std::domain_error("p_count_series: requires j >= 0");
  return p_series_impl(t, j);
}

double q_count_series(double t, int j) {
  if (j < 0) throw std::domain_error("q_count_series: requires j >= 0");
  return q_series_impl(t, j);
}

namespace {

CountDistribution distribution_impl(CountDistribution::Kind kind, double t,
                                    double tail_tol) {
  if (std::isnan(t) || t < 0.0 || t == kInf) {
    throw std::domain_error("distribution: requires finite t >= 0");
  }
  // Smallest J with Poisson tail below tolerance.
  double cum = std::exp(-t);
  double w = cum;
  int j_max = 0;
  while (1.0 - cum > tail_tol) {
    if (j_max >= sf::kStirlingMax) {
      throw sf::PrecisionError("distribution: tail tolerance unreachable");
    }
    ++j_max;
    w *= t / j_max;
    cum += w;
  }
  CountDistribution out;
  out.kind = kind;
  out.area = t;
  out.tail_bound = std::max(0.0, 1.0 - cum);
  out.probs.resize(j_max + 1);
  for (int j = 0; j <= j_max; ++j) {
    out.probs[j] = (kind == CountDistribution::Kind::P) ? p_count(t, j)
                                                        : q_count(t, j);
  }
  return out;
}

}  // namespace

CountDistribution p_distribution(double t, double tail_tol) {
  return distribution_impl(CountDistribution::Kind::P, t, tail_tol);
}

CountDistribution q_distribution(double t, double tail_tol) {
  return distribution_impl(CountDistribution::Kind::Q, t, tail_tol);
}

double p_deriv(double s, int j) {
  if (!(s > 0.0) || s == kInf) throw std::domain_error("p_deriv: requires finite s > 0");
  if (j < 0) throw std::domain_error("p_deriv: requires j >= 0");
  return threshold_coeff(s, j) / s;
}

double p_deriv_series(double s, int j) {
  if (!(s > 0.0) || s == kInf) {
    throw std::domain_error("p_deriv_series: requires finite s > 0");
  }
  if (j < 0) throw std::domain_error("p_deriv_series: requires j >= 0");
  if (j == 0) return -std::exp(-s);  // p_{-1} = 0 and integral e^x p_0 = s
  // integral_0^s e^x p_j(x) dx = sum_k sigma1(k,j)/k! s^{k+1}/(k+1)!
  const auto& s1 = sf::stirling_first();
  double u = s;  // s^{k+1} / (k+1)!
  double sum = 0.0;
  for (int k = 0; k <= s1.max_index(); ++k) {
    const double prev = (k >= j - 1) ? s1.ratio(k, j - 1) : 0.0;
    const double here = (k >= j) ? s1.ratio(k, j) : 0.0;
    sum += (prev - here) * u;
    u *= s / (k + 2);
  }
  return std::exp(-s) / s * sum;
}

double q_deriv(double s, int j) {
  if (!(s > 0.0) || s == kInf) throw std::domain_error("q_deriv: requires finite s > 0");
  return (p_count(s, j) - q_count(s, j)) / s;
}

double p_threshold_count(double t, double s, int j) {
  if (!(s > 0.0)) throw std::domain_error("p_threshold_count: requires s > 0");
  if (j < 0) throw std::domain_error("p_threshold_count: requires j >= 0");
  if (std::isnan(t) || t < 0.0) {
    throw std::domain_error("p_threshold_count: requires t >= 0");
  }
  if (t < s) return p_count(t, j);
  return threshold_coeff(s, j) * sf::scaled_I(t, s) + p_count(s, j);
}

double q_threshold_count(double t, double s, int j) {
  if (!(s > 0.0)) throw std::domain_error("q_threshold_count: requires s > 0");
  if (j < 0) throw std::domain_error("q_threshold_count: requires j >= 0");
  if (std::isnan(t) || t < 0.0) {
    throw std::domain_error("q_threshold_count: requires t >= 0");
  }
  if (t < s) return q_count(t, j);
  // s^2 e^s q_j'(s) I2(t,s) with s q_j'(s) = p_j(s) - q_j(s), the e^s
  // carried by the scaled integral.
  const double b = s * (p_count(s, j) - q_count(s, j));
  return b * sf::scaled_I2(t, s) + q_count(s, j);
}

double p_transition_upper(double t, double s) {
  if (!(s > 0.0 && s < t) || t == kInf) {
    throw std::domain_error("p_transition_upper: requires 0 < s < t < inf");
  }
  // P(t,[s,t]) = 1 - e^{s-t} - s e^{-t} integral_s^t e^x/x dx
  const double tail = sf::exp_scaled_J(t) -
                      std::exp(-t) * (sf::J(s).value - std::log(t / s));
  return 1.0 - std::exp(s - t) - s * tail;
}

double p_absorb(double t) {
  if (std::isnan(t) || t < 0.0) throw std::domain_error("p_absorb: requires t >= 0");
  return t == kInf ? 0.0 : std::exp(-t);
}

double q_transition_low(double t, double s) {
  if (!(s > 0.0 && s <= t) || t == kInf) {
    throw std::domain_error("q_transition_low: requires 0 < s <= t < inf");
  }
  return (std::exp(-t) - std::exp(s - t) + s) / t;
}

double q_transition_upper(double t, double s) {
  if (!(s > 0.0 && s <= t) || t == kInf) {
    throw std::domain_error("q_transition_upper: requires 0 < s <= t < inf");
  }
  return (std::exp(s - t) + t - 1.0 - s) / t;
}

double q_absorb(double t) { return q_count(t, 0); }

double TransitionLaw::mass_upper(double s) const {
  return kind == CountDistribution::Kind::P ? p_transition_upper(state, s)
                                            : q_transition_upper(state, s);
}

double TransitionLaw::mass_lower(double s) const {
  if (kind == CountDistribution::Kind::Q) return q_transition_low(state, s);
  return 1.0 - p_absorb(state) - p_transition_upper(state, s);
}

double TransitionLaw::absorb() const {
  return kind == CountDistribution::Kind::P ? p_absorb(state) : q_absorb(state);
}

double first_visit_cdf_P(double t, double s, double x) {
  if (!(x > 0.0 && x <= s && s <= t)) {
    throw std::domain_error("first_visit_cdf_P: requires 0 < x <= s <= t");
  }
  // phi = I(t,s) e^s (s-x) + (e^{-s} - s I(t,s)) (e^s - e^x - x int_x^s e^u/u du),
  // written with e^s folded into the scaled integrals.
  const double si = sf::scaled_I(t, s);
  const double jsx = sf::exp_scaled_J(s) -
                     std::exp(-s) * (sf::J(x).value - std::log(s / x));
  return si * (s - x) +
         (1.0 - s * si) * (1.0 - std::exp(x - s) - x * jsx);
}

double first_visit_density_P(double t, double s, double x) {
  if (!(x > 0.0 && x <= s && s <= t)) {
    throw std::domain_error("first_visit_density_P: requires 0 < x <= s <= t");
  }
  const double si = sf::scaled_I(t, s);
  const double jsx = sf::exp_scaled_J(s) -
                     std::exp(-s) * (sf::J(x).value - std::log(s / x));
  return si + (1.0 - s * si) * jsx;
}

double eu_marginal_survival(EuKind kind, int k, double s) {
  if (k < 1) throw std::domain_error("eu_marginal_survival: requires k >= 1");
  if (!(s > 0.0)) throw std::domain_error("eu_marginal_survival: requires s > 0");
  double sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += (kind == EuKind::A) ? p_threshold_count(kInf, s, j)
                               : q_threshold_count(kInf, s, j);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double inversion_partial_sum(int j, double t, int m) {
  const auto& s2 = sf::stirling_second();
  if (j < 0 || m < j || m > s2.max_index()) {
    throw std::out_of_range("inversion_partial_sum: need 0 <= j <= m <= table max");
  }
  double sum = 0.0;
  for (int k = j; k <= m; ++k) {
    const double term = s2.scaled(k, j) * p_count(t, k);
    sum += ((k - j) % 2 == 0) ? term : -term;
  }
  return sum;
}

double inversion_partial_sum_q(int k, double t, int m) {
  const auto& s2 = sf::stirling_second();
  if (k < 0 || m < k || m > s2.max_index()) {
    throw std::out_of_range("inversion_partial_sum_q: need 0 <= k <= m <= table max");
  }
  double sum = 0.0;
  for (int j = k; j <= m; ++j) {
    const double term = s2.scaled(j, k) * q_count(t, j);
    sum += ((j - k) % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace reccalc::recordlaw
