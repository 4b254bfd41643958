#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nonlocal/degree.hpp"
#include "nonlocal/measure.hpp"
#include "nonlocal/ode.hpp"
#include "nonlocal/trajectory.hpp"

namespace nonlocal {

/// Full data of the boundary value problem x' = f(t,x),
/// h(int_0^1 x(s) dg(s)) = 0 on [0,1] in R^k.
struct Problem {
  std::size_t k;
  VectorField f;
  BVFunction g;
  BoundaryMap h;

  Problem(std::size_t k_, VectorField f_, BVFunction g_, BoundaryMap h_);
};

/// int_0^1 x(s) dg(s).
std::vector<double> nonlocal_value(const Trajectory& x, const Problem& p);

/// h(int_0^1 x(s) dg(s)) — the reduced finite-dimensional map (JQN)(x).
std::vector<double> boundary_residual(const Trajectory& x, const Problem& p);

/// (K_{P,Q}N)(x)(t) = int_0^t f(s,x(s)) ds + t * h(int_0^1 x dg),
/// evaluated node-wise with cumulative Simpson on the trajectory grid.
Trajectory kpq_n(const Trajectory& x, const Problem& p);

/// Fixed-point defect sup_t |x(t) - x(0) - (1+t) h(int x dg) - int_0^t f(s,x(s)) ds|_2.
/// Zero (up to quadrature tolerance) exactly for solutions of the BVP.
double coincidence_residual(const Trajectory& x, const Problem& p);

/// Shooting map over ker L: S_lambda(c) = h(int_0^1 x_{c,lambda}(s) dg(s))
/// where x_{c,lambda} solves x' = lambda f(t,x), x(0) = c.
std::vector<double> shooting(std::span<const double> c, double lambda, const Problem& p,
                             std::size_t steps);

}  // namespace nonlocal
