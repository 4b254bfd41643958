#include "nonlocal/ode.hpp"

#include <cmath>
#include <string>

#include "nonlocal/errors.hpp"

namespace nonlocal {
namespace {

std::vector<std::string> state_slot_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k + 1);
  names.emplace_back("t");
  for (std::size_t j = 1; j <= k; ++j) names.push_back("x" + std::to_string(j));
  return names;
}

}  // namespace

VectorField::VectorField(std::size_t k, std::vector<expr::Expression> components)
    : components_(std::move(components)) {
  if (k == 0) throw InvalidArgument("vector field dimension must be positive");
  if (components_.size() != k)
    throw InvalidArgument("vector field needs exactly k component expressions");
  const auto names = state_slot_names(k);
  for (const auto& e : components_) {
    compiled_.emplace_back(e, names);  // throws EvalError on foreign variables
    stack_need_ = std::max(stack_need_, compiled_.back().stack_need());
  }
}

VectorField::Workspace VectorField::make_workspace() const {
  Workspace ws;
  ws.slots.assign(dim() + 1, 0.0);
  ws.stack.assign(stack_need_, 0.0);
  return ws;
}

void VectorField::eval(double t, std::span<const double> x, std::span<double> out,
                       Workspace& ws) const {
  ws.slots[0] = t;
  for (std::size_t j = 0; j < dim(); ++j) ws.slots[j + 1] = x[j];
  for (std::size_t j = 0; j < dim(); ++j) out[j] = compiled_[j].eval(ws.slots, ws.stack);
}

Trajectory integrate(const VectorField& f, std::span<const double> c, double lambda,
                     std::size_t steps) {
  const std::size_t k = f.dim();
  if (c.size() != k) throw InvalidArgument("initial value dimension mismatch");
  if (steps < 2) throw InvalidArgument("integrate requires steps >= 2");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw InvalidArgument("lambda must lie in [0,1]");

  Trajectory traj = make_trajectory(k, steps);
  for (std::size_t j = 0; j < k; ++j) traj.values[j] = c[j];

  auto ws = f.make_workspace();
  std::vector<double> x(c.begin(), c.end());
  std::vector<double> k1(k), k2(k), k3(k), k4(k), tmp(k);
  const double h = 1.0 / static_cast<double>(steps);

  for (std::size_t n = 0; n < steps; ++n) {
    const double t = traj.times[n];
    const double tm = t + 0.5 * h;
    const double t1 = traj.times[n + 1];

    f.eval(t, x, k1, ws);
    for (std::size_t j = 0; j < k; ++j) {
      k1[j] *= lambda;
      tmp[j] = x[j] + 0.5 * h * k1[j];
    }
    f.eval(tm, tmp, k2, ws);
    for (std::size_t j = 0; j < k; ++j) {
      k2[j] *= lambda;
      tmp[j] = x[j] + 0.5 * h * k2[j];
    }
    f.eval(tm, tmp, k3, ws);
    for (std::size_t j = 0; j < k; ++j) {
      k3[j] *= lambda;
      tmp[j] = x[j] + h * k3[j];
    }
    f.eval(t1, tmp, k4, ws);
    for (std::size_t j = 0; j < k; ++j) {
      k4[j] *= lambda;
      x[j] += h * ((k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j]) / 6.0);
      if (!std::isfinite(x[j]))
        throw EscapeError("integrator state became non-finite", t1);
      traj.values[(n + 1) * k + j] = x[j];
    }
  }
  return traj;
}

double endpoint_error_estimate(const VectorField& f, std::span<const double> c, double lambda,
                               std::size_t steps) {
  const Trajectory coarse = integrate(f, c, lambda, steps);
  const Trajectory fine = integrate(f, c, lambda, 2 * steps);
  double s = 0.0;
  const std::size_t k = f.dim();
  for (std::size_t j = 0; j < k; ++j) {
    const double d = coarse.values[(coarse.nodes() - 1) * k + j] -
                     fine.values[(fine.nodes() - 1) * k + j];
    s += d * d;
  }
  // 4th order: the coarse-fine gap overestimates the fine error by ~15x.
  return std::sqrt(s) / 15.0;
}

}  // namespace nonlocal
