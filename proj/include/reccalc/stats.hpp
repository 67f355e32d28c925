#pragma once

#include <functional>
#include <vector>

// Goodness-of-fit machinery for the verification harness: two-sample and
// one-sample Kolmogorov-Smirnov with the asymptotic p-value, chi-square
// with small-expectation cells merged.

namespace reccalc::stats {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
KsResult ks_one_sample(std::vector<double> samples,
                       const std::function<double(double)>& cdf);

struct Chi2Result {
  double statistic = 0.0;
  double p_value = 1.0;
  int dof = 0;
};

// observed are counts, expected the matching expected counts; adjacent
// cells are merged until every expected count is at least 5.
Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected);

// P(K > lambda) for the Kolmogorov statistic's limiting distribution.
double kolmogorov_survival(double lambda);

// Regularized upper incomplete gamma Q(a,x).
double gamma_q(double a, double x);

}  // namespace reccalc::stats
