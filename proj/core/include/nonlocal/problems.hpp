#pragma once

#include <cstddef>
#include <vector>

#include "nonlocal/coincidence.hpp"
#include "nonlocal/expr.hpp"
#include "nonlocal/measure.hpp"
#include "nonlocal/ode.hpp"

namespace nonlocal {

/// Second-order problem x'' = f(t,x,x') with the split nonlocal conditions
/// h1(int x dg1, int x' dg2) = 0, h2(int x dg1, int x' dg2) = 0.
/// f2 components are expressions in t, x1..xk, y1..yk (y = x');
/// h1/h2 components in u1..u2k (u1..uk the x-integrals, the rest the
/// x'-integrals).
struct SecondOrderSpec {
  std::size_t k = 1;
  std::vector<expr::Expression> f2;
  std::vector<expr::Expression> h1;
  std::vector<expr::Expression> h2;
  std::vector<BVComponent> g1;
  std::vector<BVComponent> g2;
};

/// First-order reduction: state (x, y), field (y, f(t,x,y)), boundary map
/// (h1, h2), integrator (g1, g2). Dimension doubles.
Problem reduce_second_order(const SecondOrderSpec& s);

/// x'' = f(t,x,x'), x(0) = 0, int_0^1 x'(s) dg(s) = 0 — the resonance
/// problem (g(1) - g(0) = 0 required per component). g may have k
/// components or a single component replicated.
Problem resonance_problem(std::size_t k, std::vector<expr::Expression> f2,
                          const BVFunction& g);

/// x'' = f(t,x,x'), x(0) = 0, x'(0) = int_0^1 x'(s) dg(s).
Problem problem_P(std::size_t k, std::vector<expr::Expression> f2, const BVFunction& g);

/// x' = f(t,x) with x(0) = x(1): every integrator component jumps by +1 at 0
/// and -1 at 1, h = identity.
Problem periodic_problem(VectorField f);

/// Substitution x~(t) = x(1-t): field f~(t,x) = -f(1-t,x) and integrator
/// g~ = -g(1-.), which swaps the endpoint jumps (with sign preserved in the
/// integral: stieltjes(reverse(phi), g~) = stieltjes(phi, g)). h unchanged.
Problem time_reverse(const Problem& p);

/// Reverses the node order of a trajectory (x~(t) = x(1-t) on the same grid).
Trajectory reverse_trajectory(const Trajectory& x);

}  // namespace nonlocal
