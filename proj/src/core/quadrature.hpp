#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

namespace adyn {

// Adaptive bisection over single Gauss-Kronrod 31 panels. Boost 1.74 reports
// panel errors in reference-interval units, so each one is rescaled here.
struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace detail {

template <class F>
QuadratureResult gk_panel(F& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
  return {v, err * 0.5 * (b - a)};
}

template <class F>
QuadratureResult gk_refine(F& f, double a, double b, QuadratureResult whole, double abs_tol, int depth) {
  if (depth == 0 || whole.error <= abs_tol) return whole;
  const double m = 0.5 * (a + b);
  const auto left = gk_refine(f, a, m, gk_panel(f, a, m), 0.5 * abs_tol, depth - 1);
  const auto right = gk_refine(f, m, b, gk_panel(f, m, b), 0.5 * abs_tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

template <class F>
QuadratureResult integrate_adaptive(F f, double a, double b, double rel_tol, int max_depth = 12) {
  if (!(b > a)) return {};
  const auto whole = detail::gk_panel(f, a, b);
  return detail::gk_refine(f, a, b, whole, rel_tol * std::abs(whole.value), max_depth);
}

}  // namespace adyn
