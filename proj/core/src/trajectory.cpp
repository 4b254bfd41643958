#include "nonlocal/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "nonlocal/errors.hpp"

namespace nonlocal {

double Trajectory::interpolate(std::size_t component, double t) const {
  const std::size_t n = nodes();
  if (n == 0) throw InvalidArgument("interpolate on empty trajectory");
  if (t <= times.front()) return values[component];
  if (t >= times.back()) return values[(n - 1) * dim + component];
  const std::size_t steps = n - 1;
  auto idx = static_cast<std::size_t>(t * static_cast<double>(steps));
  idx = std::min(idx, steps - 1);
  const double t0 = times[idx];
  const double t1 = times[idx + 1];
  const double w = (t - t0) / (t1 - t0);
  const double a = values[idx * dim + component];
  const double b = values[(idx + 1) * dim + component];
  return a + w * (b - a);
}

double Trajectory::sup_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < nodes(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      const double v = values[i * dim + j];
      s += v * v;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

Trajectory make_trajectory(std::size_t dim, std::size_t steps) {
  Trajectory t;
  t.dim = dim;
  t.times.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    t.times[i] = static_cast<double>(i) / static_cast<double>(steps);
  t.values.assign((steps + 1) * dim, 0.0);
  return t;
}

double sup_distance(const Trajectory& a, const Trajectory& b) {
  if (a.dim != b.dim || a.nodes() != b.nodes())
    throw InvalidArgument("sup_distance requires matching grids");
  double best = 0.0;
  for (std::size_t i = 0; i < a.nodes(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.dim; ++j) {
      const double d = a.values[i * a.dim + j] - b.values[i * b.dim + j];
      s += d * d;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace nonlocal
