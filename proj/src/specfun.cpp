#include "reccalc/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace reccalc::specfun {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail_precision(const std::string& what) {
  throw PrecisionError("specfun: " + what);
}

}  // namespace

ExpIntegralValue J(double t) {
  if (!std::isfinite(t)) throw std::domain_error("J: t must be finite");
  if (std::abs(t) > kArgumentCap) fail_precision("J: |t| exceeds magnitude cap");
  if (t == 0.0) return {0.0, 0.0};

  // sum_{k>=1} t^k / (k * k!)
  double u = t;  // t^k / k!
  double sum = 0.0;
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    const double term = u / k;
    sum += term;
    u *= t / (k + 1);
    const double next = std::abs(u) / (k + 1);
    if (next < kSeriesAbsTol && next < kDefaultTol * std::max(1.0, std::abs(sum))) {
      const double rho = std::abs(t) / (k + 2);
      const double tail = rho < 0.5 ? next / (1.0 - rho) : 2.0 * next;
      return {sum, tail + 8e-16 * std::abs(sum)};
    }
  }
  fail_precision("J: series did not converge within term cap");
}

double E1(double x) {
  if (x <= 0.0) throw std::domain_error("E1: requires x > 0");
  if (x >= 1.0) return std::exp(-x) * E1_scaled(x);
  // Power series: E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k/(k k!)
  double u = x;  // x^k / k!
  double sum = 0.0;
  for (int k = 1; k <= kMaxSeriesTerms; ++k) {
    const double term = ((k & 1) ? u : -u) / k;
    sum += term;
    u *= x / (k + 1);
    if (u / (k + 1) < kSeriesAbsTol) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

double E1_scaled(double x) {
  if (x <= 0.0) throw std::domain_error("E1_scaled: requires x > 0");
  if (x == kInf) return 0.0;
  if (x < 1.0) return std::exp(x) * E1(x);
  // Modified Lentz on the continued fraction
  //   e^x E1(x) = 1/(x+1- 1/(x+3- 4/(x+5- 9/(...))))
  const double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 400; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = a * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h;
  }
  fail_precision("E1_scaled: continued fraction did not converge");
}

double J_negative(double s) {
  if (s < 0.0) throw std::domain_error("J_negative: requires s >= 0");
  if (s == 0.0) return 0.0;
  // The alternating series cancels catastrophically once e^s dwarfs ln s,
  // so switch early to J(-s) = -gamma - ln s - E1(s).
  if (s < 0.5) return J(-s).value;
  return -kEulerGamma - std::log(s) - E1(s);
}

double exp_scaled_J(double t) {
  if (t < 0.0) throw std::domain_error("exp_scaled_J: requires t >= 0");
  if (t == kInf) return 0.0;
  if (t <= 45.0) return std::exp(-t) * J(t).value;
  // e^{-t} Ei(t) = sum_k k!/t^{k+1} truncated where terms stop improving;
  // then e^{-t} J(t) = e^{-t}(Ei(t) - gamma - ln t).
  double term = 1.0 / t;
  double sum = 0.0;
  for (int k = 0; k < 200; ++k) {
    sum += term;
    const double next = term * (k + 1) / t;
    if (next < 1e-18 * sum || next >= term) break;
    term = next;
  }
  return sum - std::exp(-t) * (kEulerGamma + std::log(t));
}

ExpIntegralValue I(double t, double s) {
  if (!(s > 0.0)) throw std::domain_error("I: requires s > 0");
  if (t < s) return {0.0, 0.0};
  const double e1s = E1(s);
  const double e1t = (t == kInf) ? 0.0 : E1(t);
  return {e1s - e1t, 4e-16 * (std::abs(e1s) + std::abs(e1t)) + 1e-17};
}

ExpIntegralValue I2(double t, double s) {
  if (!(s > 0.0)) throw std::domain_error("I2: requires s > 0");
  if (t < s) throw std::domain_error("I2: requires t >= s");
  const auto i = I(t, s);
  const double head = std::exp(-s) / s - ((t == kInf) ? 0.0 : std::exp(-t) / t);
  return {head - i.value, i.abs_error_bound + 4e-16 * std::abs(head)};
}

double scaled_I(double t, double s) {
  if (!(s > 0.0)) throw std::domain_error("scaled_I: requires s > 0");
  if (t < s) return 0.0;
  if (t == kInf) return E1_scaled(s);
  return E1_scaled(s) - std::exp(s - t) * E1_scaled(t);
}

double scaled_I2(double t, double s) {
  if (!(s > 0.0)) throw std::domain_error("scaled_I2: requires s > 0");
  if (t < s) throw std::domain_error("scaled_I2: requires t >= s");
  const double cross = (t == kInf) ? 0.0 : std::exp(s - t) / t;
  return 1.0 / s - cross - scaled_I(t, s);
}

double harmonic(int k) {
  if (k < 0) throw std::domain_error("harmonic: requires k >= 0");
  double h = 0.0;
  for (int i = 1; i <= k; ++i) h += 1.0 / i;
  return h;
}

StirlingTable::StirlingTable(StirlingKind kind, int max_index)
    : kind_(kind), max_index_(max_index) {
  if (max_index < 0) throw std::domain_error("StirlingTable: bad max_index");
  rows_.resize(max_index + 1);
  for (int k = 0; k <= max_index; ++k) {
    rows_[k].assign(k + 1, BigInt(0));
  }
  rows_[0][0] = 1;
  for (int k = 1; k <= max_index; ++k) {
    for (int j = 0; j <= k; ++j) {
      BigInt v = 0;
      if (j > 0) v += rows_[k - 1][j - 1];
      if (j <= k - 1) {
        if (kind == StirlingKind::first_signless) {
          v += BigInt(k - 1) * rows_[k - 1][j];
        } else {
          v += BigInt(j) * rows_[k - 1][j];
        }
      }
      rows_[k][j] = v;
    }
  }
  if (kind == StirlingKind::first_signless) {
    ratio_.resize(max_index + 1);
    ratio_prefix_.resize(max_index + 1);
    BigInt kfact = 1;
    for (int k = 0; k <= max_index; ++k) {
      if (k > 0) kfact *= k;
      ratio_[k].resize(k + 1);
      ratio_prefix_[k].assign(max_index + 1, 0.0);
      for (int j = 0; j <= k; ++j) {
        ratio_[k][j] = static_cast<double>(rows_[k][j]) / static_cast<double>(kfact);
      }
      for (int j = 0; j <= max_index; ++j) {
        const double here = (j <= k) ? ratio_[k][j] : 0.0;
        ratio_prefix_[k][j] = (k > 0 ? ratio_prefix_[k - 1][j] : 0.0) + here;
      }
    }
  } else {
    scaled_.resize(max_index + 1);
    BigInt jfact;
    for (int k = 0; k <= max_index; ++k) {
      scaled_[k].resize(k + 1);
      jfact = 1;
      for (int j = 0; j <= k; ++j) {
        if (j > 0) jfact *= j;
        scaled_[k][j] = static_cast<double>(rows_[k][j] * jfact);
      }
    }
  }
}

void StirlingTable::check(int k, int j) const {
  if (k < 0 || k > max_index_ || j < 0 || j > k) {
    throw std::out_of_range("StirlingTable: index outside table");
  }
}

const BigInt& StirlingTable::exact(int k, int j) const {
  check(k, j);
  return rows_[k][j];
}

double StirlingTable::ratio(int k, int j) const {
  check(k, j);
  if (kind_ != StirlingKind::first_signless) {
    throw std::logic_error("StirlingTable::ratio: first-kind table only");
  }
  return ratio_[k][j];
}

double StirlingTable::ratio_prefix(int k, int j) const {
  if (k < 0 || k > max_index_ || j < 0 || j > max_index_) {
    throw std::out_of_range("StirlingTable: index outside table");
  }
  if (kind_ != StirlingKind::first_signless) {
    throw std::logic_error("StirlingTable::ratio_prefix: first-kind table only");
  }
  return ratio_prefix_[k][j];
}

double StirlingTable::scaled(int k, int j) const {
  check(k, j);
  if (kind_ != StirlingKind::second) {
    throw std::logic_error("StirlingTable::scaled: second-kind table only");
  }
  return scaled_[k][j];
}

const StirlingTable& stirling_first() {
  static const StirlingTable table(StirlingKind::first_signless, kStirlingMax);
  return table;
}

const StirlingTable& stirling_second() {
  static const StirlingTable table(StirlingKind::second, kStirlingMax);
  return table;
}

const BigInt& stirling(StirlingKind kind, int k, int j) {
  const auto& table =
      (kind == StirlingKind::first_signless) ? stirling_first() : stirling_second();
  return table.exact(k, j);
}

BigInt factorial_exact(int k) {
  if (k < 0 || k > kStirlingMax) throw std::out_of_range("factorial_exact: bad k");
  BigInt f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace reccalc::specfun
