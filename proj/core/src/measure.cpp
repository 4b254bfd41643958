#include "nonlocal/measure.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "nonlocal/detail/quadrature.hpp"
#include "nonlocal/errors.hpp"

namespace nonlocal {
namespace {

const std::string kTimeSlot[] = {"t"};

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

BVFunction::BVFunction(std::vector<BVComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw InvalidArgument("BVFunction needs at least one component");
  for (std::size_t j = 0; j < components_.size(); ++j) {
    const auto& atoms = components_[j].interior_atoms;
    double prev = 0.0;
    for (const Atom& a : atoms) {
      if (!(a.location > 0.0 && a.location < 1.0))
        throw InvalidArgument("atom location must lie strictly inside (0,1)");
      if (!(a.location > prev))
        throw InvalidArgument("atom locations must be strictly increasing");
      prev = a.location;
    }
    compiled_density_.emplace_back(components_[j].density, kTimeSlot);
    density_stack_ = std::max(density_stack_, compiled_density_.back().stack_need());
  }
}

std::vector<double> BVFunction::jump_at_zero_vector() const {
  std::vector<double> out(dim());
  for (std::size_t j = 0; j < dim(); ++j) out[j] = components_[j].jump_at_zero;
  return out;
}

double BVFunction::density_value(std::size_t j, double t) const {
  double slots[1] = {t};
  std::vector<double> stack(density_stack_);
  return compiled_density_[j].eval(slots, stack);
}

void BVFunction::density_values(std::size_t j, std::span<const double> times,
                                std::span<double> out) const {
  std::vector<double> stack(density_stack_);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double slots[1] = {times[i]};
    out[i] = compiled_density_[j].eval(slots, stack);
  }
}

double BVFunction::interior_variation() const {
  // Atoms at the same location count once with the Euclidean norm of the
  // stacked weights, matching the variation of the vector-valued g.
  std::map<double, std::vector<double>> merged;
  for (std::size_t j = 0; j < dim(); ++j) {
    for (const Atom& a : components_[j].interior_atoms) {
      auto& w = merged[a.location];
      w.resize(dim(), 0.0);
      w[j] += a.weight;
    }
  }
  double atoms = 0.0;
  for (const auto& [loc, w] : merged) atoms += norm2(w);

  std::vector<double> stack(density_stack_);
  auto speed = [&](double t) {
    double slots[1] = {t};
    double s = 0.0;
    for (const auto& c : compiled_density_) {
      const double v = c.eval(slots, stack);
      s += v * v;
    }
    return std::sqrt(s);
  };
  const double rough = [&] {
    double samples[129];
    for (int i = 0; i < 129; ++i) samples[i] = speed(static_cast<double>(i) / 128.0);
    return detail::composite_simpson(std::span<const double>(samples, 129), 1.0 / 128.0);
  }();
  const double tol = std::max(1e-14, 1e-10 * std::fabs(rough));
  const double arc = detail::adaptive_simpson(speed, 0.0, 1.0, tol);
  return atoms + arc;
}

double BVFunction::tail_variation() const {
  std::vector<double> jump1(dim());
  for (std::size_t j = 0; j < dim(); ++j) jump1[j] = components_[j].jump_at_one;
  return interior_variation() + norm2(jump1);
}

double BVFunction::head_variation() const {
  std::vector<double> jump0(dim());
  for (std::size_t j = 0; j < dim(); ++j) jump0[j] = components_[j].jump_at_zero;
  return interior_variation() + norm2(jump0);
}

std::vector<double> BVFunction::total_change() const {
  std::vector<double> out(dim());
  std::vector<double> stack(density_stack_);
  for (std::size_t j = 0; j < dim(); ++j) {
    const BVComponent& c = components_[j];
    double total = c.jump_at_zero + c.jump_at_one;
    for (const Atom& a : c.interior_atoms) total += a.weight;
    auto w = [&](double t) {
      double slots[1] = {t};
      return compiled_density_[j].eval(slots, stack);
    };
    const double rough = [&] {
      double samples[65];
      for (int i = 0; i < 65; ++i) samples[i] = w(static_cast<double>(i) / 64.0);
      return detail::composite_simpson(std::span<const double>(samples, 65), 1.0 / 64.0);
    }();
    const double tol = std::max(1e-14, 1e-10 * std::fabs(rough));
    out[j] = total + detail::adaptive_simpson(w, 0.0, 1.0, tol);
  }
  return out;
}

std::vector<double> stieltjes(const Trajectory& phi, const BVFunction& g) {
  if (phi.nodes() == 0) throw InvalidArgument("stieltjes on empty trajectory");
  if (phi.dim != g.dim())
    throw InvalidArgument("trajectory and integrator dimensions differ");
  const std::size_t n = phi.nodes();
  const std::size_t k = g.dim();
  const double h = n > 1 ? phi.times[1] - phi.times[0] : 0.0;

  std::vector<double> out(k, 0.0);
  std::vector<double> density(n);
  std::vector<double> product(n);
  for (std::size_t j = 0; j < k; ++j) {
    const BVComponent& c = g.component(j);
    double acc = phi.values[j] * c.jump_at_zero;
    for (const Atom& a : c.interior_atoms)
      acc += phi.interpolate(j, a.location) * a.weight;
    acc += phi.values[(n - 1) * k + j] * c.jump_at_one;
    if (n > 1) {
      g.density_values(j, phi.times, density);
      for (std::size_t i = 0; i < n; ++i)
        product[i] = phi.values[i * k + j] * density[i];
      acc += detail::composite_simpson(product, h);
    }
    out[j] = acc;
  }
  return out;
}

}  // namespace nonlocal
