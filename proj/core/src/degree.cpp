#include "nonlocal/degree.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nonlocal/detail/newton.hpp"
#include "nonlocal/detail/sampling.hpp"
#include "nonlocal/errors.hpp"

namespace nonlocal {
namespace {

std::vector<std::string> map_slot_names(std::size_t k) {
  std::vector<std::string> names;
  names.reserve(k);
  for (std::size_t j = 1; j <= k; ++j) names.push_back("u" + std::to_string(j));
  return names;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Wrapped angle from a to b in (-pi, pi].
double angle_delta(double ax, double ay, double bx, double by) {
  const double cross = ax * by - ay * bx;
  const double dot = ax * bx + ay * by;
  return std::atan2(cross, dot);
}

}  // namespace

BoundaryMap::BoundaryMap(std::size_t k, std::vector<expr::Expression> components)
    : components_(std::move(components)) {
  if (k == 0) throw InvalidArgument("boundary map dimension must be positive");
  if (components_.size() != k)
    throw InvalidArgument("boundary map needs exactly k component expressions");
  const auto names = map_slot_names(k);
  for (const auto& e : components_) {
    compiled_.emplace_back(e, names);
    stack_need_ = std::max(stack_need_, compiled_.back().stack_need());
  }
}

BoundaryMap::Workspace BoundaryMap::make_workspace() const {
  Workspace ws;
  ws.slots.assign(dim(), 0.0);
  ws.stack.assign(stack_need_, 0.0);
  return ws;
}

void BoundaryMap::eval(std::span<const double> u, std::span<double> out, Workspace& ws) const {
  for (std::size_t j = 0; j < dim(); ++j) ws.slots[j] = u[j];
  for (std::size_t j = 0; j < dim(); ++j) out[j] = compiled_[j].eval(ws.slots, ws.stack);
}

std::vector<double> BoundaryMap::operator()(std::span<const double> u) const {
  auto ws = make_workspace();
  std::vector<double> out(dim());
  eval(u, out, ws);
  return out;
}

std::string to_string(DegreeMethod m) {
  switch (m) {
    case DegreeMethod::Sign1D: return "sign-1d";
    case DegreeMethod::Winding2D: return "winding-2d";
    case DegreeMethod::RootCountND: return "root-count-nd";
    case DegreeMethod::Product: return "product";
  }
  return "?";
}

namespace {

DegreeResult degree_sign_1d(const BoundaryMap& h, double r, const DegreeOptions& opt) {
  auto ws = h.make_workspace();
  double hp = 0.0, hm = 0.0;
  double up[1] = {r};
  double um[1] = {-r};
  h.eval(up, {&hp, 1}, ws);
  h.eval(um, {&hm, 1}, ws);
  const double mb = std::min(std::fabs(hp), std::fabs(hm));
  if (mb <= opt.boundary_tolerance)
    throw DegreeError("degree undefined: h vanishes on the boundary {-r, r}");
  DegreeResult res;
  res.value = (sign_of(hp) - sign_of(hm)) / 2;
  res.method = DegreeMethod::Sign1D;
  res.certified = mb > 0.0;
  res.min_boundary_norm = mb;
  return res;
}

struct CircleSample {
  double theta;
  double vx, vy;
  double norm;
};

DegreeResult degree_winding_2d(const BoundaryMap& h, double r, const DegreeOptions& opt) {
  auto ws = h.make_workspace();
  double out[2];
  double min_norm = std::numeric_limits<double>::infinity();
  auto sample = [&](double theta) {
    const double u[2] = {r * std::cos(theta), r * std::sin(theta)};
    h.eval(u, out, ws);
    CircleSample s{theta, out[0], out[1], std::hypot(out[0], out[1])};
    min_norm = std::min(min_norm, s.norm);
    if (s.norm <= opt.boundary_tolerance)
      throw DegreeError("degree undefined: |h| vanishes on the boundary circle");
    return s;
  };

  auto accumulate = [&](auto&& self, const CircleSample& a, const CircleSample& b,
                        int depth) -> double {
    const double delta = angle_delta(a.vx, a.vy, b.vx, b.vy);
    if (std::fabs(delta) < std::numbers::pi / 2.0) return delta;
    if (depth <= 0)
      throw DegreeError("winding inconclusive: angle increments did not refine below pi/2");
    const CircleSample mid = sample(0.5 * (a.theta + b.theta));
    return self(self, a, mid, depth - 1) + self(self, mid, b, depth - 1);
  };

  const std::size_t initial = 64;
  std::vector<CircleSample> ring;
  ring.reserve(initial + 1);
  for (std::size_t i = 0; i <= initial; ++i)
    ring.push_back(sample(2.0 * std::numbers::pi * static_cast<double>(i) /
                          static_cast<double>(initial)));

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i)
    total += accumulate(accumulate, ring[i], ring[i + 1], opt.max_refinement_depth);

  const double winding = total / (2.0 * std::numbers::pi);
  const auto value = static_cast<int>(std::lround(winding));
  const double residual = std::fabs(winding - static_cast<double>(value));
  if (residual >= opt.winding_residual_tol)
    throw DegreeError("winding inconclusive: residual " + std::to_string(residual));
  DegreeResult res;
  res.value = value;
  res.method = DegreeMethod::Winding2D;
  res.certified = true;
  res.min_boundary_norm = min_norm;
  return res;
}

DegreeResult degree_root_count(const BoundaryMap& h, double r, const DegreeOptions& opt) {
  const std::size_t k = h.dim();
  auto ws = h.make_workspace();

  // Boundary check on a deterministic sphere sample.
  double min_norm = std::numeric_limits<double>::infinity();
  {
    const auto sphere = detail::sphere_points(k, std::max<std::size_t>(256, 16 * k));
    std::vector<double> u(k), v(k);
    for (std::size_t i = 0; i * k < sphere.size(); ++i) {
      for (std::size_t j = 0; j < k; ++j) u[j] = r * sphere[i * k + j];
      h.eval(u, v, ws);
      min_norm = std::min(min_norm, detail::norm2(v));
    }
    if (min_norm <= opt.boundary_tolerance)
      throw DegreeError("degree undefined: |h| vanishes on the boundary sphere");
  }

  auto F = [&](std::span<const double> u, std::span<double> out) -> bool {
    try {
      h.eval(u, out, ws);
    } catch (const EvalError&) {
      return false;
    }
    for (double v : out)
      if (!std::isfinite(v)) return false;
    return true;
  };

  detail::NewtonOptions nopt;
  nopt.fd_step = 1e-6;
  nopt.central_differences = true;
  nopt.relative_step = true;

  const auto seeds = detail::halton_ball_points(k, opt.heuristic_seeds, r);
  std::vector<std::vector<double>> roots;
  int degree_sum = 0;
  std::vector<double> jac(k * k), base(k), col(k), col2(k);
  for (std::size_t s = 0; s * k < seeds.size(); ++s) {
    const std::span<const double> seed(seeds.data() + s * k, k);
    const auto outcome = detail::damped_newton(F, seed, nopt);
    if (!outcome.converged) continue;
    if (detail::norm2(outcome.x) >= r) continue;  // root outside the open ball
    bool dup = false;
    for (const auto& known : roots) {
      double d2 = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double d = known[j] - outcome.x[j];
        d2 += d * d;
      }
      if (std::sqrt(d2) < 1e-6) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    roots.push_back(outcome.x);

    // Sign of the finite-difference Jacobian determinant at the root.
    std::vector<double> x = outcome.x;
    for (std::size_t j = 0; j < k; ++j) {
      const double step = 1e-6 * std::max(1.0, std::fabs(x[j]));
      const double saved = x[j];
      x[j] = saved + step;
      F(x, col);
      x[j] = saved - step;
      F(x, col2);
      x[j] = saved;
      for (std::size_t i = 0; i < k; ++i) jac[i * k + j] = (col[i] - col2[i]) / (2.0 * step);
    }
    degree_sum += detail::det_sign(jac, k);
  }

  DegreeResult res;
  res.value = degree_sum;
  res.method = DegreeMethod::RootCountND;
  res.certified = false;
  res.min_boundary_norm = min_norm;
  return res;
}

}  // namespace

DegreeResult degree(const BoundaryMap& h, double r, const DegreeOptions& opt) {
  if (!(r > 0.0)) throw InvalidArgument("degree radius must be positive");
  switch (h.dim()) {
    case 1: return degree_sign_1d(h, r, opt);
    case 2: return degree_winding_2d(h, r, opt);
    default: return degree_root_count(h, r, opt);
  }
}

DegreeResult product_degree(const BoundaryMap& h1, const BoundaryMap& h2, double r,
                            const DegreeOptions& opt) {
  const DegreeResult a = degree(h1, r, opt);
  const DegreeResult b = degree(h2, r, opt);
  DegreeResult res;
  res.value = a.value * b.value;
  res.method = DegreeMethod::Product;
  res.certified = a.certified && b.certified;
  res.min_boundary_norm = std::min(a.min_boundary_norm, b.min_boundary_norm);
  return res;
}

}  // namespace nonlocal
