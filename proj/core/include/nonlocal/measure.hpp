#pragma once

#include <cstddef>
#include <vector>

#include "nonlocal/expr.hpp"
#include "nonlocal/trajectory.hpp"

namespace nonlocal {

/// A point mass of the integrator strictly inside (0,1).
struct Atom {
  double location = 0.0;
  double weight = 0.0;
};

/// One component of a vector-valued bounded-variation integrator, represented
/// as jumps at the endpoints, finitely many interior atoms, and an absolutely
/// continuous density w(t) on (0,1):
///   dg = jump0*delta_0+ + sum_i weight_i*delta_{t_i} + jump1*delta_1- + w(t) dt.
struct BVComponent {
  double jump_at_zero = 0.0;           // g(0+) - g(0)
  std::vector<Atom> interior_atoms;    // strictly increasing locations in (0,1)
  double jump_at_one = 0.0;            // g(1) - g(1-)
  expr::Expression density;            // expression in t; defaults to 0
};

/// Immutable vector-valued BV integrator. The Stieltjes integral against it is
/// componentwise; variations use the Euclidean norm on jump vectors, with atoms
/// at equal locations merged across components.
class BVFunction {
public:
  explicit BVFunction(std::vector<BVComponent> components);

  std::size_t dim() const noexcept { return components_.size(); }
  const BVComponent& component(std::size_t j) const { return components_[j]; }
  const std::vector<BVComponent>& components() const noexcept { return components_; }

  /// (g^1(0+)-g^1(0), ..., g^k(0+)-g^k(0)).
  std::vector<double> jump_at_zero_vector() const;

  /// lim_{eps->0+} var(g, [eps,1]): density arc length + interior atoms +
  /// jump at 1; the jump at 0 is excluded. Density integral by adaptive
  /// quadrature to 1e-10 relative.
  double tail_variation() const;

  /// lim_{eps->0+} var(g, [0,1-eps]): jump at 0 + interior atoms + density;
  /// the jump at 1 is excluded.
  double head_variation() const;

  /// Density of component j at time t.
  double density_value(std::size_t j, double t) const;

  /// Density of component j at many times at once (no per-call allocation).
  void density_values(std::size_t j, std::span<const double> times,
                      std::span<double> out) const;

  /// Total change g(1) - g(0) per component (jumps + atoms + integrated density).
  std::vector<double> total_change() const;

private:
  double interior_variation() const;  // atoms in (0,1) + density arc length

  std::vector<BVComponent> components_;
  std::vector<expr::Compiled> compiled_density_;
  std::size_t density_stack_ = 1;
};

/// Riemann-Stieltjes integral of a continuous trajectory against g,
/// componentwise:
///   phi^j(0)*jump0^j + sum_i phi^j(t_i)*w_i^j + phi^j(1)*jump1^j + int phi^j w^j.
/// Atom values of phi come from linear interpolation on the trajectory grid;
/// the density term uses composite Simpson on that grid.
std::vector<double> stieltjes(const Trajectory& phi, const BVFunction& g);

}  // namespace nonlocal
