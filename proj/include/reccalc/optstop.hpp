#pragma once

#include <string>
#include <utility>
#include <vector>

// Optimal thresholds and value functions for the best-choice problems:
//   FI        full information, optimal threshold t_F (root of J(t) = 1)
//   VC / HC   vertical / horizontal cut, optimal threshold t_P
//             (root of q_0(t) = q_1(t)); the two values coincide
//   duration  expected record-holding time, t * q_1(t,s), optimal s = t_P
// plus the ordinary-Poisson coincidence values, the stopping-time
// distribution of a threshold policy, and the win-rate density.

namespace reccalc::optstop {

struct ThresholdSolution {
  std::string name;          // "t_F", "t_P", ...
  double root;
  double defining_residual;  // residual of the defining equation at root
  std::pair<double, double> bracket;
};

// Root of J(t) = 1 on [0.5, 1.5]; equivalently p_0(t) = p_1(t).
ThresholdSolution solve_tF();

// Root of q_0(t) = q_1(t) on [1.5, 3.0].
ThresholdSolution solve_tP();

// Memoized roots (computed once, thread-safe).
double t_F();
double t_P();

// Optimal best-choice probability v(t) = p_1(t, t_F); v(inf) = v_F.
double value_FI(double t);

// Optimal probabilities u(t) = q_1(t, t_P) for VC and w(t) for HC.
// The HC value is the identical number by the DP equivalence u == w.
double value_VC(double t);
double value_HC(double t);

// Maximizer and value of the greedy policy performance p_1(t).
struct GreedyOptimum {
  double t_star;
  double value;
};
GreedyOptimum greedy_optimum();

// Expected duration reward t * q_1(t,s) for finite t, s > 0.
double duration_value(double t, double s);

// Ordinary Poisson process on the half-axis with an exponential cut:
// the four coincident stopping values at threshold j, each evaluated from
// its own closed form.  Returns three entries for j = 1 (the fourth needs
// j >= 2), four entries otherwise; all equal e^{-j} j^j / j!.
std::vector<double> poisson_digression(int j);

// f(t,xi,s): probability that the threshold-s policy applied to a rectangle
// of area t (width rescaled to 1) stops at an atom left of xi in [0,1).
// Piecewise in t: 1-e^{-t xi} for t below s, constant in t beyond
// s/(1-xi), where it coincides with the stop-coordinate law of the
// semi-infinite problem (t = inf accepted).
double stop_time_cdf(double t, double xi, double s);

// Win-rate density d/dxi of the probability that the policy stops at the
// overall best atom before time xi; integrates to p_1(inf,s) over [0,1].
// Endpoints are the analytic limits 1-e^{-s} and e^{-s}.
double win_rate_density(double xi, double s);

// Value function sampled on a grid; problem is one of
// "fi", "vc", "hc", "duration", "greedy".
struct ValueCurve {
  std::string problem;
  std::vector<double> t_grid;
  std::vector<double> values;
};
ValueCurve value_curve(const std::string& problem, std::vector<double> t_grid);

}  // namespace reccalc::optstop
