#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "nonlocal/expr.hpp"

namespace nonlocal {

/// Boundary map h: R^k -> R^k, k expressions in u1..uk.
class BoundaryMap {
public:
  BoundaryMap(std::size_t k, std::vector<expr::Expression> components);

  std::size_t dim() const noexcept { return components_.size(); }
  const expr::Expression& component(std::size_t j) const { return components_[j]; }
  const std::vector<expr::Expression>& components() const noexcept { return components_; }

  struct Workspace {
    std::vector<double> slots;
    std::vector<double> stack;
  };
  Workspace make_workspace() const;

  void eval(std::span<const double> u, std::span<double> out, Workspace& ws) const;

  /// Convenience allocating overload.
  std::vector<double> operator()(std::span<const double> u) const;

private:
  std::vector<expr::Expression> components_;
  std::vector<expr::Compiled> compiled_;
  std::size_t stack_need_ = 1;
};

enum class DegreeMethod { Sign1D, Winding2D, RootCountND, Product };

std::string to_string(DegreeMethod m);

struct DegreeResult {
  int value = 0;
  DegreeMethod method = DegreeMethod::Sign1D;
  bool certified = false;  // exact methods (sign-1d, winding-2d) only
  double min_boundary_norm = 0.0;
};

struct DegreeOptions {
  double boundary_tolerance = 1e-12;   // |h| at or below this is "vanishing"
  double winding_residual_tol = 0.01;  // |total/2pi - nearest integer|
  int max_refinement_depth = 26;
  std::size_t heuristic_seeds = 512;   // k >= 3 root search
};

/// Brouwer degree deg(h, B(0,r), 0).
///   k = 1: boundary sign formula (exact).
///   k = 2: winding number by adaptive angle accumulation (exact).
///   k >= 3: multi-start root count with Jacobian signs; certified = false.
/// Throws DegreeError when the boundary (nearly) vanishes or the winding is
/// inconclusive.
DegreeResult degree(const BoundaryMap& h, double r, const DegreeOptions& opt = {});

/// Product property for split maps on the product of balls:
/// deg((h1,h2), B x B, 0) = deg(h1, B, 0) * deg(h2, B, 0).
DegreeResult product_degree(const BoundaryMap& h1, const BoundaryMap& h2, double r,
                            const DegreeOptions& opt = {});

}  // namespace nonlocal
