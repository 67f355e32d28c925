#include "reccalc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reccalc::stats {

namespace {

double ks_p_from_d(double d, double n_effective) {
  const double sq = std::sqrt(n_effective);
  return kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d);
}

double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::domain_error("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int m = 1; m <= 200; ++m) {
    const double term = std::exp(-2.0 * m * m * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double xa = a[i], xb = b[j];
    if (xa <= xb) {
      while (i < a.size() && a[i] == xa) ++i;
    }
    if (xb <= xa) {
      while (j < b.size() && b[j] == xb) ++j;
    }
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  return {d, ks_p_from_d(d, ne)};
}

KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_one_sample: empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
  }
  return {d, ks_p_from_d(d, n)};
}

Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected) {
  if (observed.empty() || observed.size() != expected.size()) {
    throw std::invalid_argument("chi2_gof: size mismatch or empty input");
  }
  std::vector<double> obs_m, exp_m;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= 5.0) {
      obs_m.push_back(o_acc);
      exp_m.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (obs_m.empty()) throw std::invalid_argument("chi2_gof: expected counts too small");
    obs_m.back() += o_acc;
    exp_m.back() += e_acc;
  }
  if (obs_m.size() < 2) {
    throw std::invalid_argument("chi2_gof: fewer than two usable cells");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs_m.size(); ++i) {
    const double diff = obs_m[i] - exp_m[i];
    stat += diff * diff / exp_m[i];
  }
  const int dof = static_cast<int>(obs_m.size()) - 1;
  return {stat, gamma_q(dof / 2.0, stat / 2.0), dof};
}

}  // namespace reccalc::stats
