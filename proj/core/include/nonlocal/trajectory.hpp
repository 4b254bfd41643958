#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nonlocal {

/// Vector-valued function sampled on a uniform grid over [0,1]:
/// times[i] = i/N, values stored row-major as nodes x dim.
struct Trajectory {
  std::size_t dim = 0;
  std::vector<double> times;
  std::vector<double> values;

  std::size_t nodes() const noexcept { return times.size(); }

  std::span<const double> value(std::size_t node) const {
    return {values.data() + node * dim, dim};
  }
  std::span<double> value(std::size_t node) {
    return {values.data() + node * dim, dim};
  }

  /// Linear interpolation of one component at an off-grid time t in [0,1].
  double interpolate(std::size_t component, double t) const;

  /// max over nodes of the Euclidean norm of the state.
  double sup_norm() const;
};

/// Uniform grid with N+1 nodes, times[i] = i/N exactly at the endpoints.
Trajectory make_trajectory(std::size_t dim, std::size_t steps);

/// max over nodes of |a(t_i) - b(t_i)|_2; requires matching grids.
double sup_distance(const Trajectory& a, const Trajectory& b);

}  // namespace nonlocal
