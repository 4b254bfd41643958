#pragma once

// Independent reference computations for the test suites. Everything here is
// built on different numerics than the library (tagged partition sums, dense
// angle sampling, closed forms) so the two sides check each other.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <vector>

#include "nonlocal/coincidence.hpp"
#include "nonlocal/measure.hpp"
#include "nonlocal/ode.hpp"
#include "nonlocal/problems.hpp"
#include "nonlocal/trajectory.hpp"

namespace oracle {

// splitmix64: deterministic across platforms and standard library versions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::uint64_t state_;
};

struct Poly {
  std::vector<double> coeffs;  // c0 + c1 t + c2 t^2 + ...

  double operator()(double t) const {
    double acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * t + coeffs[i];
    return acc;
  }

  double derivative_bound_on_unit() const {  // crude sup |p'| on [0,1]
    double b = 0.0;
    for (std::size_t i = 1; i < coeffs.size(); ++i)
      b += static_cast<double>(i) * std::fabs(coeffs[i]);
    return b;
  }
};

inline Poly random_poly(Rng& rng, int degree, double lo = -1.0, double hi = 1.0) {
  Poly p;
  for (int i = 0; i <= degree; ++i) p.coeffs.push_back(rng.uniform(lo, hi));
  return p;
}

// Scalar BV data with the density given as an independent callable.
struct ComponentData {
  double jump0 = 0.0;
  double jump1 = 0.0;
  std::vector<std::pair<double, double>> atoms;  // (location, weight), increasing
  std::function<double(double)> density;         // may be empty (zero density)
};

namespace detail {

inline std::vector<double> partition_points(const std::vector<ComponentData>& comps,
                                            double a, double b, std::size_t mesh) {
  std::vector<double> pts;
  pts.reserve(mesh + 8);
  for (std::size_t i = 0; i <= mesh; ++i)
    pts.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(mesh));
  for (const auto& c : comps)
    for (const auto& [loc, w] : c.atoms)
      if (loc > a && loc < b) pts.push_back(loc);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

// Increment of one component over the cell (lo, hi]; jump0 counts when the
// cell starts at 0, jump1 when it ends at 1. Density by 2-point Gauss.
inline double cell_increment(const ComponentData& c, double lo, double hi) {
  double inc = 0.0;
  if (lo == 0.0) inc += c.jump0;
  if (hi == 1.0) inc += c.jump1;
  for (const auto& [loc, w] : c.atoms)
    if (loc > lo && loc <= hi) inc += w;
  if (c.density) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (lo + hi);
    const double off = half / std::sqrt(3.0);
    inc += half * (c.density(mid - off) + c.density(mid + off));
  }
  return inc;
}

}  // namespace detail

// Tagged Riemann-Stieltjes partition sum for one component over [0,1]: at
// least `mesh` uniform points plus the atom locations; tags are the left
// endpoint 0 for the first cell, 1 for the last, the atom for atom cells and
// the midpoint elsewhere — a legitimate tagged sum whose tags kill the
// first-order error at every jump.
inline double stieltjes_partition_sum(const std::function<double(double)>& phi,
                                      const ComponentData& c, std::size_t mesh) {
  const auto pts = detail::partition_points({c}, 0.0, 1.0, mesh);
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double lo = pts[i - 1];
    const double hi = pts[i];
    double tag = 0.5 * (lo + hi);
    if (lo == 0.0) tag = 0.0;
    if (hi == 1.0) tag = 1.0;
    for (const auto& [loc, w] : c.atoms)
      if (loc == hi) tag = hi;
    total += phi(tag) * detail::cell_increment(c, lo, hi);
  }
  return total;
}

// Partition-sum total variation of the vector-valued g over [a,b] (Euclidean
// norms of the stacked per-cell increments).
inline double variation_partition_sum(const std::vector<ComponentData>& comps, double a,
                                      double b, std::size_t mesh) {
  const auto pts = detail::partition_points(comps, a, b, mesh);
  double total = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double s = 0.0;
    for (const auto& c : comps) {
      const double inc = detail::cell_increment(c, pts[i - 1], pts[i]);
      s += inc * inc;
    }
    total += std::sqrt(s);
  }
  return total;
}

// Brute-force winding number of theta -> h(r cos, r sin) over `samples`
// uniform boundary points.
inline int winding_number(const std::function<void(double, double&, double&)>& h,
                          std::size_t samples) {
  double total = 0.0;
  double px = 0.0, py = 0.0;
  h(0.0, px, py);
  for (std::size_t i = 1; i <= samples; ++i) {
    const double theta =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(samples);
    double cx = 0.0, cy = 0.0;
    h(theta, cx, cy);
    total += std::atan2(px * cy - py * cx, px * cx + py * cy);
    px = cx;
    py = cy;
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

// --- closed forms ------------------------------------------------------------

inline double exp_oracle_x(double t) { return 0.5 * std::exp(-t); }

inline double periodic_c_star() {
  return 1.0 / (1.0 + 4.0 * std::numbers::pi * std::numbers::pi);
}

inline double periodic_x(double t) {
  const double w = 2.0 * std::numbers::pi;
  return (std::cos(w * t) + w * std::sin(w * t)) / (1.0 + w * w);
}

// --- shared problem builders --------------------------------------------------

inline nonlocal::BVComponent unit_step_at_zero() {
  nonlocal::BVComponent c;
  c.jump_at_zero = 1.0;
  return c;
}

inline nonlocal::BVComponent periodic_component() {
  nonlocal::BVComponent c;
  c.jump_at_zero = 1.0;
  c.jump_at_one = -1.0;
  return c;
}

// k=1, x' = -x, unit step at 0, h(u) = u - 1/2; solution x = exp_oracle_x.
inline nonlocal::Problem exp_oracle_problem() {
  using namespace nonlocal;
  return Problem(1, VectorField(1, {expr::parse("-x1")}), BVFunction({unit_step_at_zero()}),
                 BoundaryMap(1, {expr::parse("u1-0.5")}));
}

// k=1, x' = -x + cos(2 pi t), periodic condition x(0) = x(1).
inline nonlocal::Problem periodic_oracle_problem() {
  using namespace nonlocal;
  return periodic_problem(VectorField(1, {expr::parse("-x1+cos(2*pi*t)")}));
}

// Samples component-wise closed forms onto the solver grid.
inline nonlocal::Trajectory sample_trajectory(
    std::size_t dim, std::size_t steps,
    const std::function<double(std::size_t, double)>& component_at) {
  nonlocal::Trajectory t = nonlocal::make_trajectory(dim, steps);
  for (std::size_t i = 0; i <= steps; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      t.values[i * dim + j] = component_at(j, t.times[i]);
  return t;
}

}  // namespace oracle
