#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <stdexcept>

// Adaptive Gauss-Kronrod (7,15) quadrature for the smooth integrands that
// appear in the threshold-value formulas.  Test suites carry their own
// independent quadrature oracle; this one is the runtime workhorse.

namespace reccalc::quadrature {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  long evaluations = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] of |x| and weights, 7-point Gauss embedded.
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

template <class F>
inline void gk15(const F& f, double a, double b, double& kronrod, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double result_gauss = kWg[3] * fc;
  double result_kronrod = kWgk[7] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    result_kronrod += kWgk[i] * (f1 + f2);
    if (i % 2 == 1) result_gauss += kWg[i / 2] * (f1 + f2);
  }
  kronrod = result_kronrod * h;
  err = std::abs((result_kronrod - result_gauss) * h);
}

template <class F>
inline void refine(const F& f, double a, double b, double abs_tol, double rel_tol,
                   int depth, QuadResult& out) {
  double v, e;
  gk15(f, a, b, v, e);
  out.evaluations += 15;
  const double local_tol = std::max(abs_tol, rel_tol * std::abs(v));
  if (e <= local_tol || depth >= 52 || b - a < 1e-300) {
    out.value += v;
    out.abs_error += e;
    if (e > local_tol) out.converged = false;
    return;
  }
  const double m = 0.5 * (a + b);
  refine(f, a, m, 0.5 * abs_tol, rel_tol, depth + 1, out);
  refine(f, m, b, 0.5 * abs_tol, rel_tol, depth + 1, out);
}

}  // namespace detail

template <class F>
QuadResult integrate(const F& f, double a, double b, double abs_tol = 1e-12,
                     double rel_tol = 1e-12) {
  QuadResult out;
  if (!(std::isfinite(a) && std::isfinite(b))) {
    throw std::domain_error("integrate: bounds must be finite");
  }
  if (a == b) return out;
  detail::refine(f, a, b, abs_tol, rel_tol, 0, out);
  return out;
}

}  // namespace reccalc::quadrature
