#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

#include "nonlocal/errors.hpp"

namespace nonlocal::detail {

/// Composite Simpson over uniformly spaced samples with spacing h.
/// An odd interval count is handled with a 3/8 tail; a single interval
/// degrades to the trapezoid rule.
inline double composite_simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  const std::size_t intervals = n - 1;
  if (intervals == 1) return 0.5 * h * (y[0] + y[1]);
  std::size_t simpson_end = intervals;  // index of the last node covered by pairs
  double tail = 0.0;
  if (intervals % 2 != 0) {
    if (intervals < 3) return 0.5 * h * (y[0] + y[1]);
    simpson_end = intervals - 3;
    tail = 3.0 * h / 8.0 *
           (y[intervals - 3] + 3.0 * y[intervals - 2] + 3.0 * y[intervals - 1] + y[intervals]);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    sum += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  return sum + tail;
}

/// Cumulative integral on a uniform grid, out[0] = 0. Even nodes use Simpson
/// pairs; odd nodes a three-point Newton-Cotes half step (third order).
inline void cumulative_simpson(std::span<const double> y, double h, std::span<double> out) {
  const std::size_t n = y.size();
  if (n == 0) return;
  out[0] = 0.0;
  if (n == 1) return;
  if (n == 2) {
    out[1] = 0.5 * h * (y[0] + y[1]);
    return;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (i % 2 == 0) {
      out[i] = out[i - 2] + h / 3.0 * (y[i - 2] + 4.0 * y[i - 1] + y[i]);
    } else if (i + 1 < n) {
      out[i] = out[i - 1] + h / 12.0 * (5.0 * y[i - 1] + 8.0 * y[i] - y[i + 1]);
    } else {
      out[i] = out[i - 1] + h / 12.0 * (-y[i - 2] + 8.0 * y[i - 1] + 5.0 * y[i]);
    }
  }
}

/// Adaptive Simpson to absolute tolerance tol. Throws QuadratureError when the
/// recursion depth is exhausted before the local error criterion is met.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 48) {
  auto simpson = [](double lo, double hi, double flo, double fmid, double fhi) {
    return (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
  };
  auto recurse = [&](auto&& self, double lo, double mid, double hi, double flo, double fmid,
                     double fhi, double whole, double eps, int depth) -> double {
    const double lmid = 0.5 * (lo + mid);
    const double rmid = 0.5 * (mid + hi);
    const double flm = f(lmid);
    const double frm = f(rmid);
    const double left = simpson(lo, mid, flo, flm, fmid);
    const double right = simpson(mid, hi, fmid, frm, fhi);
    const double delta = left + right - whole;
    if (std::fabs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth <= 0) throw QuadratureError("adaptive quadrature did not converge");
    return self(self, lo, lmid, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
           self(self, mid, rmid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
  };
  const double mid = 0.5 * (a + b);
  const double fa = f(a), fm = f(mid), fb = f(b);
  const double whole = simpson(a, b, fa, fm, fb);
  return recurse(recurse, a, mid, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace nonlocal::detail
