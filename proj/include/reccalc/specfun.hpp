#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <vector>

// Exponential-integral style special functions and combinatorial tables.
// Everything here is a pure function of its arguments; the Stirling tables
// are built once and immutable afterwards.

namespace reccalc::specfun {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Series / evaluation controls.
inline constexpr double kDefaultTol = 1e-12;   // target abs error of results
inline constexpr double kSeriesAbsTol = 1e-15; // term cutoff inside series
inline constexpr int kMaxSeriesTerms = 500;
inline constexpr double kArgumentCap = 700.0;  // |t| beyond this overflows e^t
inline constexpr int kStirlingMax = 64;

// Thrown when a series or table cannot deliver the requested accuracy.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Value of an integral together with a bound on its absolute error.
struct ExpIntegralValue {
  double value = 0.0;
  double abs_error_bound = 0.0;
};

// J(t) = integral_0^t (e^x - 1)/x dx, entire in t (negative t allowed).
// The strict term cutoff (absolute 1e-15 and relative) certifies |t| up to
// roughly 60 within the term cap; beyond that a PrecisionError is thrown
// and callers use exp_scaled_J instead.
ExpIntegralValue J(double t);

// I(t,s) = integral_s^t e^{-x}/x dx for 0 < s <= t (t may be +infinity).
// By convention I(t,s) = 0 for t < s.  Requires s > 0.
ExpIntegralValue I(double t, double s);

// I2(t,s) = integral_s^t e^{-x}/x^2 dx = e^{-s}/s - e^{-t}/t - I(t,s).
// Requires 0 < s <= t (t may be +infinity).
ExpIntegralValue I2(double t, double s);

// E1(x) = integral_x^inf e^{-u}/u du, x > 0.  Power series below 1,
// modified Lentz continued fraction above.
double E1(double x);

// e^x * E1(x), stable for arbitrarily large x.
double E1_scaled(double x);

// e^{-t} * J(t) for t >= 0, stable for large t (asymptotic branch above 45).
double exp_scaled_J(double t);

// J(-s) for s >= 0 via the identity J(-s) = -gamma - ln s - E1(s) when the
// alternating series would cancel badly.
double J_negative(double s);

// Scaled exponential integrals used by the threshold-value formulas:
//   scaled_I(t,s)  = e^s * I(t,s)
//   scaled_I2(t,s) = e^s * I2(t,s)
// Both stay bounded for large s where I and I2 underflow.
double scaled_I(double t, double s);
double scaled_I2(double t, double s);

// Harmonic number h(k) = 1 + 1/2 + ... + 1/k, h(0) = 0.
double harmonic(int k);

enum class StirlingKind { first_signless, second };

// Triangular table of exact Stirling numbers up to max_index, with
// double-precision scaled companions:
//   first kind:  ratio(k,j)        = sigma1(k,j)/k!      (always <= 1)
//                ratio_prefix(k,j) = sum_{i<=k} sigma1(i,j)/i!
//   second kind: scaled(k,j)       = sigma2(k,j)*j!
class StirlingTable {
 public:
  explicit StirlingTable(StirlingKind kind, int max_index = kStirlingMax);

  StirlingKind kind() const { return kind_; }
  int max_index() const { return max_index_; }

  const BigInt& exact(int k, int j) const;
  double ratio(int k, int j) const;
  double ratio_prefix(int k, int j) const;
  double scaled(int k, int j) const;

 private:
  void check(int k, int j) const;

  StirlingKind kind_;
  int max_index_;
  std::vector<std::vector<BigInt>> rows_;
  std::vector<std::vector<double>> ratio_;         // first kind only
  std::vector<std::vector<double>> ratio_prefix_;  // first kind only
  std::vector<std::vector<double>> scaled_;        // second kind only
};

// Shared immutable tables (built on first use).
const StirlingTable& stirling_first();
const StirlingTable& stirling_second();

// Exact Stirling number lookup, 0 <= j <= k <= kStirlingMax.
const BigInt& stirling(StirlingKind kind, int k, int j);

// k! as an exact integer, k <= kStirlingMax.
BigInt factorial_exact(int k);

}  // namespace reccalc::specfun
