#include "nonlocal/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nonlocal/certifier.hpp"
#include "nonlocal/detail/newton.hpp"
#include "nonlocal/detail/parallel.hpp"
#include "nonlocal/errors.hpp"

namespace nonlocal {

void SolverConfig::validate() const {
  if (steps < 2) throw InvalidArgument("solver.steps must be >= 2");
  if (seed_grid_per_axis < 1) throw InvalidArgument("solver.seed_grid_per_axis must be >= 1");
  if (newton_max_iter < 1) throw InvalidArgument("solver.newton_max_iter must be >= 1");
  if (!(newton_tol > 0.0)) throw InvalidArgument("solver.newton_tol must be positive");
  if (!(cauchy_tol > 0.0)) throw InvalidArgument("solver.cauchy_tol must be positive");
  if (lambda_schedule.empty()) throw InvalidArgument("solver.lambda_schedule must be non-empty");
  double prev = 0.0;
  for (double l : lambda_schedule) {
    if (!(l > prev && l <= 1.0))
      throw InvalidArgument("solver.lambda_schedule must be increasing within (0,1]");
    prev = l;
  }
  if (lambda_schedule.back() != 1.0)
    throw InvalidArgument("solver.lambda_schedule must end at 1");
  if (reg_schedule.empty()) throw InvalidArgument("solver.reg_schedule must be non-empty");
  for (int n : reg_schedule)
    if (n < 1) throw InvalidArgument("solver.reg_schedule entries must be >= 1");
}

namespace {

detail::NewtonOptions newton_options(const SolverConfig& cfg) {
  detail::NewtonOptions opt;
  opt.max_iterations = cfg.newton_max_iter;
  opt.tolerance = cfg.newton_tol;
  opt.fd_step = 1e-7;
  opt.max_halvings = 30;
  return opt;
}

std::vector<std::vector<double>> grid_seeds(std::size_t k, double R, std::size_t per_axis) {
  // Cap the total grid so high-dimensional problems stay tractable with the
  // default per-axis count; the shrink is deterministic.
  constexpr double kMaxSeeds = 32768.0;
  while (per_axis > 2 && std::pow(static_cast<double>(per_axis),
                                  static_cast<double>(k)) > kMaxSeeds)
    --per_axis;
  std::vector<double> axis;
  if (per_axis == 1) {
    axis = {0.0};
  } else {
    for (std::size_t i = 0; i < per_axis; ++i)
      axis.push_back(-R + 2.0 * R * static_cast<double>(i) /
                               static_cast<double>(per_axis - 1));
  }
  std::vector<std::vector<double>> seeds;
  std::vector<std::size_t> idx(k, 0);
  for (;;) {
    std::vector<double> seed(k);
    for (std::size_t j = 0; j < k; ++j) seed[j] = axis[idx[j]];
    seeds.push_back(std::move(seed));
    std::size_t j = 0;
    while (j < k && ++idx[j] == axis.size()) idx[j++] = 0;
    if (j == k) break;
  }
  return seeds;
}

// Newton residual function: S_lambda(c), with escapes reported as
// unevaluable points rather than exceptions.
auto shooting_fn(const Problem& p, double lambda, std::size_t steps) {
  return [&p, lambda, steps](std::span<const double> c, std::span<double> out) -> bool {
    try {
      const auto v = shooting(c, lambda, p, steps);
      std::copy(v.begin(), v.end(), out.begin());
      for (double x : v)
        if (!std::isfinite(x)) return false;
      return true;
    } catch (const EscapeError&) {
      return false;
    } catch (const EvalError&) {
      return false;
    }
  };
}

std::vector<detail::NewtonOutcome> multistart(const Problem& p, double lambda,
                                              std::span<const std::vector<double>> seeds,
                                              const SolverConfig& cfg) {
  std::vector<detail::NewtonOutcome> outcomes(seeds.size());
  const auto opt = newton_options(cfg);
  detail::parallel_for(
      seeds.size(), detail::resolve_threads(cfg.threads, seeds.size()),
      [&](std::size_t i) {
        const auto F = shooting_fn(p, lambda, cfg.steps);
        outcomes[i] = detail::damped_newton(F, seeds[i], opt);
      });
  return outcomes;
}

void note_outcome(SolveDiagnostics& diag, const detail::NewtonOutcome& out,
                  const std::vector<double>& seed) {
  ++diag.seeds_tried;
  if (out.aborted) {
    ++diag.escaped;
    return;
  }
  if (out.residual_norm < diag.best_residual) {
    diag.best_residual = out.residual_norm;
    diag.best_seed = seed;
  }
}

std::vector<std::vector<double>> collect_roots(
    std::span<const detail::NewtonOutcome> outcomes,
    std::span<const std::vector<double>> seeds, const SolverConfig& cfg,
    SolveDiagnostics& diag) {
  std::vector<std::vector<double>> roots;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    note_outcome(diag, outcomes[i], seeds[i]);
    const auto& out = outcomes[i];
    if (!out.converged || out.residual_norm > cfg.newton_tol) continue;
    bool dup = false;
    for (const auto& known : roots) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < known.size(); ++j) {
        const double d = known[j] - out.x[j];
        d2 += d * d;
      }
      if (std::sqrt(d2) < kRootDedupeDistance) {
        dup = true;
        break;
      }
    }
    if (!dup) roots.push_back(out.x);
  }
  return roots;
}

std::optional<Solution> assemble_solution(const Problem& p, double R,
                                          const SolverConfig& cfg,
                                          const std::vector<double>& c,
                                          SolveDiagnostics& diag) {
  Solution s;
  s.c = c;
  s.lambda = 1.0;
  try {
    s.trajectory = integrate(p.f, c, 1.0, cfg.steps);
  } catch (const EscapeError&) {
    ++diag.escaped;
    return std::nullopt;
  }
  s.residuals = validate(s, p);
  if (s.residuals.sup_norm > R + kSupNormSlack) {
    ++diag.discarded_outside;
    return std::nullopt;
  }
  if (s.residuals.boundary_residual_norm > kBoundaryResidualTol ||
      s.residuals.ode_residual > kOdeResidualTol ||
      s.residuals.coincidence_residual > kCoincidenceResidualTol) {
    ++diag.discarded_invalid;
    return std::nullopt;
  }
  return s;
}

std::vector<Solution> accept_pipeline(const Problem& p, double R, const SolverConfig& cfg,
                                      std::span<const detail::NewtonOutcome> outcomes,
                                      std::span<const std::vector<double>> seeds,
                                      SolveDiagnostics& diag) {
  const auto roots = collect_roots(outcomes, seeds, cfg, diag);
  std::vector<Solution> solutions;
  for (const auto& c : roots) {
    if (auto s = assemble_solution(p, R, cfg, c, diag)) solutions.push_back(std::move(*s));
  }
  return solutions;
}

[[noreturn]] void throw_no_solution(const SolveDiagnostics& diag) {
  throw SolveError("no solution found in the ball (best |S| = " +
                       std::to_string(diag.best_residual) + ", escaped seeds: " +
                       std::to_string(diag.escaped) + ")",
                   diag.best_residual, diag.best_seed);
}

}  // namespace

ResidualReport validate(const Solution& s, const Problem& p) {
  const Trajectory& x = s.trajectory;
  if (x.nodes() < 3) throw InvalidArgument("validate needs a trajectory with >= 3 nodes");
  const std::size_t n = x.nodes();
  const std::size_t k = x.dim;
  const double h = x.times[1] - x.times[0];

  ResidualReport report;
  auto ws = p.f.make_workspace();
  std::vector<double> fx(k);
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    p.f.eval(x.times[i], x.value(i), fx, ws);
    double s2 = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double deriv = (x.values[(i + 1) * k + j] - x.values[(i - 1) * k + j]) / (2.0 * h);
      const double d = deriv - fx[j];
      s2 += d * d;
    }
    worst = std::max(worst, s2);
  }
  report.ode_residual = std::sqrt(worst);

  const auto br = boundary_residual(x, p);
  report.boundary_residual_norm = detail::norm2(br);
  report.coincidence_residual = coincidence_residual(x, p);
  report.sup_norm = x.sup_norm();
  return report;
}

std::vector<Solution> solve_from_seeds(const Problem& p, double R,
                                       std::span<const std::vector<double>> seeds,
                                       const SolverConfig& cfg, SolveDiagnostics* diag) {
  cfg.validate();
  if (!(R > 0.0)) throw InvalidArgument("solve requires R > 0");
  SolveDiagnostics local;
  SolveDiagnostics& d = diag ? *diag : local;
  d.best_residual = std::numeric_limits<double>::infinity();

  const auto outcomes = multistart(p, 1.0, seeds, cfg);
  auto solutions = accept_pipeline(p, R, cfg, outcomes, seeds, d);
  if (solutions.empty()) throw_no_solution(d);
  return solutions;
}

std::vector<Solution> solve_direct(const Problem& p, double R, const SolverConfig& cfg,
                                   SolveDiagnostics* diag) {
  cfg.validate();
  if (!(R > 0.0)) throw InvalidArgument("solve requires R > 0");
  SolveDiagnostics local;
  SolveDiagnostics& d = diag ? *diag : local;
  d.best_residual = std::numeric_limits<double>::infinity();

  const auto cold_seeds = grid_seeds(p.k, R, cfg.seed_grid_per_axis);
  {
    const auto outcomes = multistart(p, 1.0, cold_seeds, cfg);
    auto solutions = accept_pipeline(p, R, cfg, outcomes, cold_seeds, d);
    if (!solutions.empty()) return solutions;
  }

  // Every cold start failed: walk the homotopy x' = lambda f, warm-starting
  // each stage from the roots of the previous one.
  d.used_continuation = true;
  std::vector<std::vector<double>> warm;
  for (std::size_t stage = 0; stage < cfg.lambda_schedule.size(); ++stage) {
    const double lambda = cfg.lambda_schedule[stage];
    const auto& seeds = warm.empty() ? cold_seeds : warm;
    const auto outcomes = multistart(p, lambda, seeds, cfg);
    if (stage + 1 == cfg.lambda_schedule.size()) {
      auto solutions = accept_pipeline(p, R, cfg, outcomes, seeds, d);
      if (!solutions.empty()) return solutions;
      break;
    }
    SolveDiagnostics stage_diag;
    stage_diag.best_residual = std::numeric_limits<double>::infinity();
    warm = collect_roots(outcomes, seeds, cfg, stage_diag);
  }
  throw_no_solution(d);
}

Problem build_regularized(const Problem& p, int n) {
  if (n < 1) throw InvalidArgument("regularization index n must be >= 1");
  const auto jump0 = p.g.jump_at_zero_vector();
  std::size_t j0 = 0;
  double best = -1.0;
  for (std::size_t j = 0; j < jump0.size(); ++j) {
    if (std::fabs(jump0[j]) > best) {
      best = std::fabs(jump0[j]);
      j0 = j;
    }
  }
  if (best == 0.0)
    throw InvalidArgument("regularization requires g(0+) != g(0)");

  // g_n^{j0}(0) = g^{j0}(0) - (1/n) sgn(jump0^{j0}): the jump grows by 1/n.
  auto comps = p.g.components();
  const double sgn = jump0[j0] > 0.0 ? 1.0 : -1.0;
  comps[j0].jump_at_zero += sgn / static_cast<double>(n);

  using expr::Expression;
  using expr::Op;
  std::vector<Expression> field;
  field.reserve(p.k);
  for (std::size_t j = 0; j < p.k; ++j) {
    const Expression term =
        Expression::binary(Op::Div, Expression::variable("x" + std::to_string(j + 1)),
                           Expression::number(static_cast<double>(n)));
    field.push_back(Expression::binary(Op::Sub, p.f.component(j), term));
  }
  return Problem(p.k, VectorField(p.k, std::move(field)), BVFunction(std::move(comps)), p.h);
}

namespace {

// Newton polish of a regularized iterate on the original problem, with full
// validation. The regularization path supplies the initial guess; the
// original shooting map accepts or rejects it.
std::optional<Solution> transfer_to_original(const Problem& p, double R,
                                             const SolverConfig& cfg,
                                             const std::vector<double>& c0) {
  const auto F = shooting_fn(p, 1.0, cfg.steps);
  const auto outcome = detail::damped_newton(F, c0, newton_options(cfg));
  if (!outcome.converged || outcome.residual_norm > cfg.newton_tol) return std::nullopt;
  SolveDiagnostics scratch;
  return assemble_solution(p, R, cfg, outcome.x, scratch);
}

const Solution* nearest_to(const std::vector<Solution>& sols, const std::vector<double>& c) {
  const Solution* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double d = s.c[j] - c[j];
      d2 += d * d;
    }
    if (d2 < best_d) {
      best_d = d2;
      best = &s;
    }
  }
  return best;
}

}  // namespace

Solution solve_with_regularization(const Problem& p, double R, const SolverConfig& cfg) {
  cfg.validate();
  if (!(R > 0.0)) throw InvalidArgument("solve requires R > 0");

  // Strict-regime problems stabilize under the transfer immediately; detect
  // once so the schedule can be left early ("harmless when unnecessary").
  const StandingCheck standing = standing_assumptions(p.g);
  const InwardCheck inward = check_inward(p.f, R, 64, 64);
  const bool original_strict = standing.strict && inward.strict;

  std::optional<Solution> prev_raw;
  std::optional<Solution> prev_transfer;
  std::optional<Solution> transferred;
  std::vector<double> gaps;
  std::vector<int> visited;

  for (int n : cfg.reg_schedule) {
    Problem pn = build_regularized(p, n);
    const StandingCheck reg_standing = standing_assumptions(pn.g);
    if (!reg_standing.ok)
      throw SolveError(
          "regularized integrator violates the standing assumptions at n=" +
              std::to_string(n),
          0.0, prev_raw ? prev_raw->c : std::vector<double>{}, gaps);

    std::vector<Solution> sols;
    try {
      if (prev_raw) {
        const std::vector<std::vector<double>> warm{prev_raw->c};
        sols = solve_from_seeds(pn, R, warm, cfg);
      } else {
        sols = solve_direct(pn, R, cfg);
      }
    } catch (const SolveError& e) {
      throw SolveError("regularization step n=" + std::to_string(n) +
                           " failed: " + e.what(),
                       e.best_residual(), e.best_seed(), gaps);
    }

    const Solution* picked =
        prev_raw ? nearest_to(sols, prev_raw->c) : &sols.front();
    Solution sol_n = *picked;
    visited.push_back(n);
    if (prev_raw) gaps.push_back(sup_distance(sol_n.trajectory, prev_raw->trajectory));

    std::optional<Solution> candidate = transfer_to_original(p, R, cfg, sol_n.c);
    if (candidate) transferred = candidate;

    bool stop = false;
    if (!gaps.empty() && gaps.back() < cfg.cauchy_tol) stop = true;
    if (original_strict && candidate && prev_transfer &&
        sup_distance(candidate->trajectory, prev_transfer->trajectory) < cfg.cauchy_tol)
      stop = true;

    prev_raw = std::move(sol_n);
    prev_transfer = std::move(candidate);
    if (stop) break;
  }

  if (!transferred)
    throw SolveError(
        "regularization path did not converge to a validated solution of the "
        "original problem",
        prev_raw ? prev_raw->residuals.boundary_residual_norm : 0.0,
        prev_raw ? prev_raw->c : std::vector<double>{}, gaps);

  transferred->cauchy_gaps = gaps;
  transferred->regularization_path = visited;
  return *transferred;
}

}  // namespace nonlocal
