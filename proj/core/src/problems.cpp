#include "nonlocal/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "nonlocal/errors.hpp"

namespace nonlocal {
namespace {

using expr::Expression;
using expr::Op;

// The step integrator of the applications section: value 1 at s = 0 and 0 on
// (0,1], so its jump at zero is -1.
BVComponent negative_unit_step_at_zero() {
  BVComponent c;
  c.jump_at_zero = -1.0;
  return c;
}

bool is_zero_literal(const Expression& e) {
  const auto& nodes = e.nodes();
  const auto& root = nodes[static_cast<std::size_t>(e.root())];
  return root.op == Op::Number && root.number == 0.0;
}

BVComponent add_components(const BVComponent& a, const BVComponent& b) {
  BVComponent out;
  out.jump_at_zero = a.jump_at_zero + b.jump_at_zero;
  out.jump_at_one = a.jump_at_one + b.jump_at_one;
  std::map<double, double> merged;
  for (const Atom& atom : a.interior_atoms) merged[atom.location] += atom.weight;
  for (const Atom& atom : b.interior_atoms) merged[atom.location] += atom.weight;
  for (const auto& [loc, w] : merged) out.interior_atoms.push_back({loc, w});
  if (is_zero_literal(a.density))
    out.density = b.density;
  else if (is_zero_literal(b.density))
    out.density = a.density;
  else
    out.density = Expression::binary(Op::Add, a.density, b.density);
  return out;
}

std::vector<BVComponent> to_k_components(const BVFunction& g, std::size_t k) {
  if (g.dim() == k) return g.components();
  if (g.dim() == 1) return std::vector<BVComponent>(k, g.component(0));
  throw InvalidArgument("integrator must have k components (or one, replicated)");
}

std::vector<Expression> identity_map(std::size_t from, std::size_t count) {
  std::vector<Expression> out;
  out.reserve(count);
  for (std::size_t j = 0; j < count; ++j)
    out.push_back(Expression::variable("u" + std::to_string(from + j)));
  return out;
}

}  // namespace

Problem reduce_second_order(const SecondOrderSpec& s) {
  const std::size_t k = s.k;
  if (k == 0) throw InvalidArgument("second-order spec needs k >= 1");
  if (s.f2.size() != k || s.h1.size() != k || s.h2.size() != k || s.g1.size() != k ||
      s.g2.size() != k)
    throw InvalidArgument("second-order spec: dimension mismatch");

  // y_j becomes x_{k+j} in the stacked state.
  std::map<std::string, std::string> renames;
  for (std::size_t j = 1; j <= k; ++j)
    renames["y" + std::to_string(j)] = "x" + std::to_string(k + j);

  std::vector<Expression> field;
  field.reserve(2 * k);
  for (std::size_t j = 1; j <= k; ++j)
    field.push_back(Expression::variable("x" + std::to_string(k + j)));
  for (const Expression& e : s.f2) field.push_back(e.rename_variables(renames));

  std::vector<Expression> boundary = s.h1;
  boundary.insert(boundary.end(), s.h2.begin(), s.h2.end());

  std::vector<BVComponent> comps = s.g1;
  comps.insert(comps.end(), s.g2.begin(), s.g2.end());

  return Problem(2 * k, VectorField(2 * k, std::move(field)),
                 BVFunction(std::move(comps)), BoundaryMap(2 * k, std::move(boundary)));
}

Problem resonance_problem(std::size_t k, std::vector<expr::Expression> f2,
                          const BVFunction& g) {
  auto comps = to_k_components(g, k);
  const BVFunction gk{comps};
  const auto change = gk.total_change();
  for (std::size_t j = 0; j < k; ++j) {
    if (std::fabs(change[j]) > 1e-12)
      throw InvalidArgument("resonance condition violated: g(1)-g(0) = " +
                            std::to_string(change[j]) + " in component " +
                            std::to_string(j + 1));
  }
  SecondOrderSpec s;
  s.k = k;
  s.f2 = std::move(f2);
  s.h1 = identity_map(1, k);
  s.h2 = identity_map(k + 1, k);
  s.g1.assign(k, negative_unit_step_at_zero());
  s.g2 = std::move(comps);
  return reduce_second_order(s);
}

Problem problem_P(std::size_t k, std::vector<expr::Expression> f2, const BVFunction& g) {
  auto g3 = to_k_components(g, k);
  SecondOrderSpec s;
  s.k = k;
  s.f2 = std::move(f2);
  s.h1 = identity_map(1, k);
  s.h2 = identity_map(k + 1, k);
  s.g1.assign(k, negative_unit_step_at_zero());
  s.g2.reserve(k);
  for (std::size_t j = 0; j < k; ++j)
    s.g2.push_back(add_components(negative_unit_step_at_zero(), g3[j]));
  return reduce_second_order(s);
}

Problem periodic_problem(VectorField f) {
  const std::size_t k = f.dim();
  BVComponent c;
  c.jump_at_zero = 1.0;   // g(0) = -1, g(0+) = 0
  c.jump_at_one = -1.0;   // g(1) = -1, g(1-) = 0
  std::vector<BVComponent> comps(k, c);
  return Problem(k, std::move(f), BVFunction(std::move(comps)),
                 BoundaryMap(k, identity_map(1, k)));
}

Problem time_reverse(const Problem& p) {
  const std::size_t k = p.k;
  const Expression one_minus_t =
      Expression::binary(Op::Sub, Expression::number(1.0), Expression::variable("t"));

  std::vector<Expression> field;
  field.reserve(k);
  for (const Expression& e : p.f.components())
    field.push_back(Expression::unary(Op::Neg, e.substitute("t", one_minus_t)));

  std::vector<BVComponent> comps;
  comps.reserve(k);
  for (const BVComponent& c : p.g.components()) {
    // g~ = -g(1-.): endpoint jumps swap, atoms reflect, weights keep their
    // sign, so the Stieltjes integral of the reversed trajectory is preserved.
    BVComponent r;
    r.jump_at_zero = c.jump_at_one;
    r.jump_at_one = c.jump_at_zero;
    r.interior_atoms.reserve(c.interior_atoms.size());
    for (auto it = c.interior_atoms.rbegin(); it != c.interior_atoms.rend(); ++it)
      r.interior_atoms.push_back({1.0 - it->location, it->weight});
    r.density = is_zero_literal(c.density) ? c.density : c.density.substitute("t", one_minus_t);
    comps.push_back(std::move(r));
  }

  return Problem(k, VectorField(k, std::move(field)), BVFunction(std::move(comps)), p.h);
}

Trajectory reverse_trajectory(const Trajectory& x) {
  Trajectory out = x;
  const std::size_t n = x.nodes();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < x.dim; ++j)
      out.values[i * x.dim + j] = x.values[(n - 1 - i) * x.dim + j];
  return out;
}

}  // namespace nonlocal
