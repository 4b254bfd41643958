#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nonlocal/expr.hpp"
#include "nonlocal/trajectory.hpp"

namespace nonlocal {

/// Right-hand side f(t,x) of x' = f(t,x), given as k expressions in the
/// variables t, x1..xk. Construction rejects any other variable reference.
class VectorField {
public:
  VectorField(std::size_t k, std::vector<expr::Expression> components);

  std::size_t dim() const noexcept { return components_.size(); }
  const expr::Expression& component(std::size_t j) const { return components_[j]; }
  const std::vector<expr::Expression>& components() const noexcept { return components_; }

  /// Scratch space for allocation-free evaluation; one per thread.
  struct Workspace {
    std::vector<double> slots;  // t, x1..xk
    std::vector<double> stack;
  };
  Workspace make_workspace() const;

  void eval(double t, std::span<const double> x, std::span<double> out, Workspace& ws) const;

private:
  std::vector<expr::Expression> components_;
  std::vector<expr::Compiled> compiled_;
  std::size_t stack_need_ = 1;
};

/// Classical fixed-step RK4 for x' = lambda f(t,x), x(0) = c, on the uniform
/// grid with the given number of steps. The value at index 0 is c exactly.
/// Throws EscapeError (with the first offending time) if the state becomes
/// non-finite, and propagates EvalError from f.
Trajectory integrate(const VectorField& f, std::span<const double> c, double lambda,
                     std::size_t steps);

/// Richardson step-doubling estimate of the endpoint error of integrate()
/// at the given step count (reported, never used adaptively).
double endpoint_error_estimate(const VectorField& f, std::span<const double> c, double lambda,
                               std::size_t steps);

}  // namespace nonlocal
