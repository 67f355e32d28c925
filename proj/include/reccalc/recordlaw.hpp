#pragma once

#include <vector>

// Closed-form record-count distributions and transition laws for the two
// box-area chains:
//   P-process  t -> (t-E)+ U          (records in a rectangle of area t)
//   Q-process  t -> (t-E) U1 1{E<tU2} (records left of a uniform vertical cut)
// plus threshold-policy visit counts, first-visit laws and the survival
// functions of the jointly represented box-area sequences (A_k), (B_k).
//
// t = +infinity is a first-class argument: it selects the semi-infinite
// strip and replaces I(t,s), I2(t,s) by their infinite-bound limits.

namespace reccalc::recordlaw {

struct CountDistribution {
  enum class Kind { P, Q };
  Kind kind;
  double area;                // parameter t
  std::vector<double> probs;  // indices 0..J
  double tail_bound;          // certified mass beyond index J
};

// p_j(t): probability of exactly j records in a rectangle of area t.
// j<=1 evaluates the closed forms e^{-t} and e^{-t}J(t); j>=2 sums the
// Stirling series with a certified Poisson tail bound (PrecisionError if the
// bound cannot be brought below 1e-12 within the table).
double p_count(double t, int j);

// q_j(t): probability of exactly j records to the left of a uniform
// vertical cut.  Closed forms (1-e^{-t})/t and (-J(-t)-e^{-t}J(t))/t for
// j<=1, Stirling series otherwise.
double q_count(double t, int j);

// Series evaluation of p_j / q_j on the entire power series, without the
// closed-form shortcuts.  Accepts negative t (used by recursion
// cross-checks); no tail certification.
double p_count_series(double t, int j);
double q_count_series(double t, int j);

// Truncated distributions with certified tail mass.
CountDistribution p_distribution(double t, double tail_tol = 1e-12);
CountDistribution q_distribution(double t, double tail_tol = 1e-12);

// Derivatives of the count functions.
//   p_deriv: p_j'(s) = e^{-s}/s * integral_0^s e^x (p_{j-1}(x)-p_j(x)) dx,
//            inner integral by adaptive quadrature (default path).
//   p_deriv_series: same quantity by exact term-wise integration of the
//            quasi-power series (cross-check path).
//   q_deriv: q_j'(s) = (p_j(s)-q_j(s))/s, exact.
double p_deriv(double s, int j);
double p_deriv_series(double s, int j);
double q_deriv(double s, int j);

// p_j(t,s): probability that the P-process started at t makes exactly j
// visits to ]0,s].  Equals p_j(t) for t < s, and
//   s e^s p_j'(s) I(t,s) + p_j(s)   for t >= s.
double p_threshold_count(double t, double s, int j);

// q_j(t,s): Q-process analogue,  I2(t,s) s^2 e^s q_j'(s) + q_j(s).
double q_threshold_count(double t, double s, int j);

// P-process one-step transition P(t,[s,t]) for 0 < s < t, and the
// absorption mass P(t,{0}) = e^{-t}.
double p_transition_upper(double t, double s);
double p_absorb(double t);

// One-step law of either chain from a fixed state: upper mass [s,t], lower
// mass ]0,s] and the absorption atom always sum to 1.
struct TransitionLaw {
  CountDistribution::Kind kind;
  double state;
  double mass_upper(double s) const;
  double mass_lower(double s) const;
  double absorb() const;
};

// Q-process one-step transition pieces for 0 < s <= t:
//   Q(t,]0,s]) = (e^{-t} - e^{s-t} + s)/t
//   Q(t,[s,t]) = (e^{s-t} + t - 1 - s)/t
// and absorption Q(t,{0}) = q_0(t).
double q_transition_low(double t, double s);
double q_transition_upper(double t, double s);
double q_absorb(double t);

// phi(t,s,x): probability that the P-process from t makes its first visit
// to ]0,s] inside [x,s], for 0 < x <= s <= t.  The x-density of the
// first-visit location is first_visit_density_P.
double first_visit_cdf_P(double t, double s, double x);
double first_visit_density_P(double t, double s, double x);

// Survival functions of the box-area sequences, k >= 1:
//   A-kind: P(A_k > s) = sum_{j<k} p_j(inf,s)
//   B-kind: P(B_k > s) = sum_{j<k} q_j(inf,s)
enum class EuKind { A, B };
double eu_marginal_survival(EuKind kind, int k, double s);

// Partial sum of the inversion series
//   e^{-t} t^j / j! = sum_{k>=j} sigma2(k,j) j! (-1)^{k-j} p_k(t)
// truncated at k = m, and the Q-analogue converging to
//   i_k(t) = (1/t) integral_0^t e^{-x} x^k/k! dx.
double inversion_partial_sum(int j, double t, int m);
double inversion_partial_sum_q(int k, double t, int m);

}  // namespace reccalc::recordlaw
