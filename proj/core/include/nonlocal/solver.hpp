#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "nonlocal/coincidence.hpp"
#include "nonlocal/trajectory.hpp"

namespace nonlocal {

struct SolverConfig {
  std::size_t steps = 1000;
  std::size_t seed_grid_per_axis = 9;
  std::size_t newton_max_iter = 50;
  double newton_tol = 1e-10;
  std::vector<double> lambda_schedule{0.1, 0.3, 0.6, 1.0};
  std::vector<int> reg_schedule{4, 8, 16, 32, 64, 128};
  double cauchy_tol = 1e-6;
  std::size_t threads = 0;  // 0 = NONLOCAL_BVP_THREADS, else hardware

  void validate() const;
};

struct ResidualReport {
  double ode_residual = 0.0;            // max interior |central diff - f|_2
  double boundary_residual_norm = 0.0;  // |h(int x dg)|_2
  double coincidence_residual = 0.0;
  double sup_norm = 0.0;
};

struct Solution {
  std::vector<double> c;  // initial value = ker-L coordinate
  double lambda = 1.0;
  Trajectory trajectory;
  ResidualReport residuals;
  std::vector<double> cauchy_gaps;       // regularization path only
  std::vector<int> regularization_path;  // n values actually visited
};

struct SolveDiagnostics {
  std::size_t seeds_tried = 0;
  std::size_t escaped = 0;             // seeds whose trajectory left the finite range
  std::size_t discarded_outside = 0;   // converged roots with sup_norm > R + slack
  std::size_t discarded_invalid = 0;   // converged roots failing residual thresholds
  bool used_continuation = false;
  double best_residual = 0.0;          // best |S| over all failed starts
  std::vector<double> best_seed;
};

/// Residual thresholds every accepted Solution satisfies.
inline constexpr double kBoundaryResidualTol = 1e-7;
inline constexpr double kOdeResidualTol = 1e-5;
inline constexpr double kCoincidenceResidualTol = 1e-5;
inline constexpr double kSupNormSlack = 1e-6;
inline constexpr double kRootDedupeDistance = 1e-6;

/// Computes the residual report of a candidate solution against a problem.
ResidualReport validate(const Solution& s, const Problem& p);

/// Multi-start damped Newton on the shooting map S_1 over seeds on a uniform
/// grid in [-R,R]^k. If every cold start fails, falls back to lambda
/// continuation along cfg.lambda_schedule, warm-starting each stage from the
/// previous roots. Roots are deduplicated, restricted to sup-norm <= R + slack
/// and validated. Throws SolveError when nothing survives.
std::vector<Solution> solve_direct(const Problem& p, double R, const SolverConfig& cfg = {},
                                   SolveDiagnostics* diag = nullptr);

/// Same search from explicit seeds (used for warm starts).
std::vector<Solution> solve_from_seeds(const Problem& p, double R,
                                       std::span<const std::vector<double>> seeds,
                                       const SolverConfig& cfg,
                                       SolveDiagnostics* diag = nullptr);

/// Regularized problem: field f - x/n and integrator g_n whose largest-jump
/// component j0 has its value at 0 shifted by -(1/n) sgn(g^{j0}(0+)-g^{j0}(0)),
/// enlarging |jump_at_zero| by exactly 1/n. The tail variation is untouched,
/// so g_n satisfies the standing inequality strictly.
Problem build_regularized(const Problem& p, int n);

/// Equality-regime solve: walks cfg.reg_schedule, solving each regularized
/// problem warm-started from the previous one, recording the Cauchy gaps
/// between consecutive regularized trajectories, then transfers the last
/// iterate to the original problem (Newton polish + full validation).
/// On strict-regime problems the transfer stabilizes immediately and the
/// schedule is left early. Throws SolveError (with the gap sequence) when the
/// path cannot be transferred to a validated solution.
Solution solve_with_regularization(const Problem& p, double R, const SolverConfig& cfg = {});

}  // namespace nonlocal
