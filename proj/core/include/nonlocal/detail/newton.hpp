#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace nonlocal::detail {

/// Dense Gaussian elimination with partial pivoting; a and b are overwritten.
/// Returns false when a pivot is (numerically) zero.
inline bool gauss_solve(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) pivot = row;
    if (std::fabs(a[pivot * n + col]) < 1e-300) return false;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t row = col + 1; row < n; ++row) {
      const double m = a[row * n + col] / a[col * n + col];
      if (m == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= m * a[col * n + j];
      b[row] -= m * b[col];
    }
  }
  for (std::size_t row = n; row-- > 0;) {
    double s = b[row];
    for (std::size_t j = row + 1; j < n; ++j) s -= a[row * n + j] * b[j];
    b[row] = s / a[row * n + row];
  }
  return true;
}

/// Sign of det(a) via elimination; 0 when singular. a is overwritten.
inline int det_sign(std::vector<double>& a, std::size_t n) {
  int sign = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row)
      if (std::fabs(a[row * n + col]) > std::fabs(a[pivot * n + col])) pivot = row;
    if (std::fabs(a[pivot * n + col]) < 1e-300) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      sign = -sign;
    }
    if (a[col * n + col] < 0.0) sign = -sign;
    for (std::size_t row = col + 1; row < n; ++row) {
      const double m = a[row * n + col] / a[col * n + col];
      if (m == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[row * n + j] -= m * a[col * n + j];
    }
  }
  return sign;
}

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

struct NewtonOptions {
  std::size_t max_iterations = 50;
  double tolerance = 1e-10;        // on |F|_2
  double fd_step = 1e-7;           // finite-difference step
  bool central_differences = false;
  bool relative_step = false;      // step scaled by max(1, |x_j|)
  std::size_t max_halvings = 30;   // damping
};

struct NewtonOutcome {
  std::vector<double> x;
  double residual_norm = 0.0;
  bool converged = false;
  bool aborted = false;  // F threw (escape / domain violation) at the seed
  std::size_t iterations = 0;
};

/// Damped Newton iteration on F: R^n -> R^n given as a callable
/// F(x, out) -> bool; a false return marks the point as unevaluable
/// (escaped trajectory) and the step is rejected. Singular Jacobians fall
/// back to a Tikhonov-regularized least-squares step, so root families
/// (rank-deficient problems) converge to the nearest root component.
inline NewtonOutcome damped_newton(
    const std::function<bool(std::span<const double>, std::span<double>)>& F,
    std::span<const double> seed, const NewtonOptions& opt) {
  const std::size_t n = seed.size();
  NewtonOutcome out;
  out.x.assign(seed.begin(), seed.end());

  std::vector<double> fx(n), ftrial(n), fcol(n), fcol2(n);
  if (!F(out.x, fx)) {
    out.aborted = true;
    out.residual_norm = std::numeric_limits<double>::infinity();
    return out;
  }
  out.residual_norm = norm2(fx);

  std::vector<double> jac(n * n), step(n), trial(n), lhs(n * n), rhs(n);
  for (out.iterations = 0; out.iterations < opt.max_iterations; ++out.iterations) {
    if (out.residual_norm <= opt.tolerance) {
      out.converged = true;
      return out;
    }
    // Finite-difference Jacobian, column by column.
    bool jac_ok = true;
    for (std::size_t j = 0; j < n && jac_ok; ++j) {
      const double h =
          opt.relative_step ? opt.fd_step * std::max(1.0, std::fabs(out.x[j])) : opt.fd_step;
      const double saved = out.x[j];
      out.x[j] = saved + h;
      jac_ok = F(out.x, fcol);
      if (jac_ok && opt.central_differences) {
        out.x[j] = saved - h;
        jac_ok = F(out.x, fcol2);
        for (std::size_t i = 0; i < n && jac_ok; ++i)
          jac[i * n + j] = (fcol[i] - fcol2[i]) / (2.0 * h);
      } else if (jac_ok) {
        for (std::size_t i = 0; i < n; ++i) jac[i * n + j] = (fcol[i] - fx[i]) / h;
      }
      out.x[j] = saved;
    }
    if (!jac_ok) return out;  // differencing left the evaluable region

    lhs = jac;
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -fx[i];
    if (!gauss_solve(lhs, rhs, n)) {
      // Singular: solve (J^T J + mu I) step = -J^T F.
      std::vector<double> jtj(n * n, 0.0), jtf(n, 0.0);
      double trace = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double s = 0.0;
          for (std::size_t r = 0; r < n; ++r) s += jac[r * n + i] * jac[r * n + j];
          jtj[i * n + j] = s;
          if (i == j) trace += s;
        }
      const double mu = 1e-12 * (trace / static_cast<double>(n) + 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        jtj[i * n + i] += mu;
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += jac[r * n + i] * fx[r];
        jtf[i] = -s;
      }
      if (!gauss_solve(jtj, jtf, n)) return out;
      rhs = jtf;
    }
    step = rhs;

    // Damping: halve until |F| decreases.
    double alpha = 1.0;
    bool improved = false;
    for (std::size_t halving = 0; halving <= opt.max_halvings; ++halving) {
      for (std::size_t j = 0; j < n; ++j) trial[j] = out.x[j] + alpha * step[j];
      if (F(trial, ftrial)) {
        const double fn = norm2(ftrial);
        if (fn < out.residual_norm) {
          out.x = trial;
          fx = ftrial;
          out.residual_norm = fn;
          improved = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!improved) return out;  // stalled
  }
  out.converged = out.residual_norm <= opt.tolerance;
  return out;
}

}  // namespace nonlocal::detail
