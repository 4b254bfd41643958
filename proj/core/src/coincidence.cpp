#include "nonlocal/coincidence.hpp"

#include <cmath>

#include "nonlocal/detail/quadrature.hpp"
#include "nonlocal/errors.hpp"

namespace nonlocal {

Problem::Problem(std::size_t k_, VectorField f_, BVFunction g_, BoundaryMap h_)
    : k(k_), f(std::move(f_)), g(std::move(g_)), h(std::move(h_)) {
  if (k == 0) throw InvalidArgument("problem dimension must be positive");
  if (f.dim() != k || g.dim() != k || h.dim() != k)
    throw InvalidArgument("problem component dimensions must all equal k");
}

std::vector<double> nonlocal_value(const Trajectory& x, const Problem& p) {
  return stieltjes(x, p.g);
}

std::vector<double> boundary_residual(const Trajectory& x, const Problem& p) {
  return p.h(nonlocal_value(x, p));
}

namespace {

// f(t_i, x(t_i)) for all grid nodes, component-major buffers reused.
void field_along(const Trajectory& x, const VectorField& f, std::vector<double>& out) {
  const std::size_t n = x.nodes();
  const std::size_t k = x.dim;
  out.resize(n * k);
  auto ws = f.make_workspace();
  std::vector<double> fi(k);
  for (std::size_t i = 0; i < n; ++i) {
    f.eval(x.times[i], x.value(i), fi, ws);
    for (std::size_t j = 0; j < k; ++j) out[i * k + j] = fi[j];
  }
}

}  // namespace

Trajectory kpq_n(const Trajectory& x, const Problem& p) {
  if (x.nodes() == 0) throw InvalidArgument("kpq_n on empty trajectory");
  const std::size_t n = x.nodes();
  const std::size_t k = x.dim;
  const double h = n > 1 ? x.times[1] - x.times[0] : 0.0;
  const std::vector<double> br = boundary_residual(x, p);

  std::vector<double> rhs;
  field_along(x, p.f, rhs);

  Trajectory out = x;
  std::vector<double> column(n), integral(n);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rhs[i * k + j];
    detail::cumulative_simpson(column, h, integral);
    for (std::size_t i = 0; i < n; ++i)
      out.values[i * k + j] = integral[i] + x.times[i] * br[j];
  }
  return out;
}

double coincidence_residual(const Trajectory& x, const Problem& p) {
  if (x.nodes() == 0) throw InvalidArgument("coincidence_residual on empty trajectory");
  const std::size_t n = x.nodes();
  const std::size_t k = x.dim;
  const double h = n > 1 ? x.times[1] - x.times[0] : 0.0;
  const std::vector<double> br = boundary_residual(x, p);

  std::vector<double> rhs;
  field_along(x, p.f, rhs);

  std::vector<double> column(n);
  std::vector<std::vector<double>> integrals(k, std::vector<double>(n));
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < n; ++i) column[i] = rhs[i * k + j];
    detail::cumulative_simpson(column, h, integrals[j]);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double d = x.values[i * k + j] - x.values[j] -
                       (1.0 + x.times[i]) * br[j] - integrals[j][i];
      s += d * d;
    }
    worst = std::max(worst, s);
  }
  return std::sqrt(worst);
}

std::vector<double> shooting(std::span<const double> c, double lambda, const Problem& p,
                             std::size_t steps) {
  const Trajectory x = integrate(p.f, c, lambda, steps);
  return boundary_residual(x, p);
}

}  // namespace nonlocal
