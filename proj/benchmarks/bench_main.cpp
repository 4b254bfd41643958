#include <benchmark/benchmark.h>

#include <cmath>

#include "nonlocal/certifier.hpp"
#include "nonlocal/coincidence.hpp"
#include "nonlocal/degree.hpp"
#include "nonlocal/measure.hpp"
#include "nonlocal/ode.hpp"
#include "nonlocal/problems.hpp"
#include "nonlocal/solver.hpp"

namespace {

using namespace nonlocal;

BVComponent unit_step() {
  BVComponent c;
  c.jump_at_zero = 1.0;
  return c;
}

Problem exp_problem() {
  return Problem(1, VectorField(1, {expr::parse("-x1")}), BVFunction({unit_step()}),
                 BoundaryMap(1, {expr::parse("u1-0.5")}));
}

void BM_Integrate(benchmark::State& state) {
  const VectorField f(1, {expr::parse("-x1+cos(2*pi*t)")});
  const double c[] = {0.5};
  const auto steps = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(integrate(f, c, 1.0, steps));
  }
}
BENCHMARK(BM_Integrate)->Arg(250)->Arg(1000)->Arg(4000);

void BM_Stieltjes(benchmark::State& state) {
  BVComponent comp;
  comp.jump_at_zero = 1.0;
  comp.interior_atoms = {{0.25, 0.5}, {0.75, -0.5}};
  comp.density = expr::parse("1+t^2");
  const BVFunction g({comp});
  const auto steps = static_cast<std::size_t>(state.range(0));
  Trajectory traj = make_trajectory(1, steps);
  for (std::size_t i = 0; i <= steps; ++i) traj.values[i] = std::sin(traj.times[i]);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stieltjes(traj, g));
  }
}
BENCHMARK(BM_Stieltjes)->Arg(1000)->Arg(10000);

void BM_WindingDegree(benchmark::State& state) {
  const BoundaryMap z2(2, {expr::parse("u1^2-u2^2"), expr::parse("2*u1*u2")});
  for (auto _ : state) {
    benchmark::DoNotOptimize(degree(z2, 1.0));
  }
}
BENCHMARK(BM_WindingDegree);

void BM_Shooting(benchmark::State& state) {
  const Problem p = exp_problem();
  const double c[] = {0.25};
  for (auto _ : state) {
    benchmark::DoNotOptimize(shooting(c, 1.0, p, 1000));
  }
}
BENCHMARK(BM_Shooting);

void BM_SolveDirect(benchmark::State& state) {
  const Problem p = exp_problem();
  SolverConfig cfg;
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_direct(p, 1.0, cfg));
  }
}
BENCHMARK(BM_SolveDirect);

void BM_Certify(benchmark::State& state) {
  const Problem p = exp_problem();
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify(p, 1.0));
  }
}
BENCHMARK(BM_Certify);

}  // namespace

BENCHMARK_MAIN();
