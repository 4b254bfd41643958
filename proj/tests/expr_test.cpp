#include <doctest.h>

#include <cmath>
#include <map>

#include "nonlocal/errors.hpp"
#include "nonlocal/expr.hpp"
#include "oracles.hpp"

using namespace nonlocal;
using expr::Expression;
using expr::Op;

namespace {

double eval(const std::string& text, std::map<std::string, double> bindings = {}) {
  return expr::parse(text).evaluate(bindings);
}

// Random AST with bounded depth; negative literals are represented as
// Neg(Number) like the parser does.
Expression random_ast(oracle::Rng& rng, int depth) {
  const char* vars[] = {"t", "x1", "x2", "u1"};
  if (depth <= 0) {
    switch (rng.uniform_int(0, 3)) {
      case 0: return Expression::number(rng.uniform(0.0, 10.0));
      case 1: return Expression::variable(vars[rng.uniform_int(0, 3)]);
      case 2: return Expression::constant(Op::ConstPi);
      default: return Expression::constant(Op::ConstE);
    }
  }
  switch (rng.uniform_int(0, 9)) {
    case 0:
      return Expression::binary(Op::Add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 1:
      return Expression::binary(Op::Sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 2:
      return Expression::binary(Op::Mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 3:
      return Expression::binary(Op::Div, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 4:
      return Expression::binary(Op::Pow, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 5: return Expression::unary(Op::Neg, random_ast(rng, depth - 1));
    case 6: return Expression::unary(Op::Sin, random_ast(rng, depth - 1));
    case 7: return Expression::unary(Op::Sqrt, random_ast(rng, depth - 1));
    case 8:
      return Expression::binary(Op::Min, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    default: return Expression::unary(Op::Abs, random_ast(rng, depth - 1));
  }
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("precedence and associativity") {
    CHECK(eval("2+3*4") == 14.0);
    CHECK(eval("2*3+4") == 10.0);
    CHECK(eval("2^3^2") == 512.0);      // right-associative
    CHECK(eval("8-3-2") == 3.0);        // left-associative
    CHECK(eval("8/4/2") == 1.0);
    CHECK(eval("-2^2") == -4.0);        // ^ binds tighter than unary -
    CHECK(eval("(-2)^2") == 4.0);
    CHECK(eval("2^-1") == 0.5);
  }

  TEST_CASE("-x1^2 parses as Neg(Pow(x1,2))") {
    const Expression e = expr::parse("-x1^2");
    const Expression expected = Expression::unary(
        Op::Neg, Expression::binary(Op::Pow, Expression::variable("x1"),
                                    Expression::number(2.0)));
    CHECK(e.structurally_equal(expected));
    CHECK(e.evaluate({{"x1", 3.0}}) == -9.0);
  }

  TEST_CASE("functions and constants") {
    CHECK(eval("sin(pi*t)", {{"t", 0.5}}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval("u1-0.5", {{"u1", 0.5}}) == 0.0);
    // e^-1 against an independent high-precision value and the libm route.
    CHECK(eval("exp(-t)", {{"t", 1.0}}) == doctest::Approx(0.3678794411714423).epsilon(1e-15));
    CHECK(eval("exp(-t)", {{"t", 1.0}}) == std::exp(-1.0));
    CHECK(eval("sgn(-3)") == -1.0);
    CHECK(eval("sgn(3)") == 1.0);
    CHECK(eval("sgn(0)") == 0.0);
    CHECK(eval("min(2,3)") == 2.0);
    CHECK(eval("max(2,3)") == 3.0);
    CHECK(eval("abs(-2.5)") == 2.5);
    CHECK(eval("sqrt(9)") == 3.0);
    CHECK(eval("ln(e)") == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("errors carry byte offsets and reasons") {
    CHECK_THROWS_AS(expr::parse(""), ParseError);
    CHECK_THROWS_AS(expr::parse("1+"), ParseError);
    CHECK_THROWS_AS(expr::parse("foo(2)"), ParseError);
    CHECK_THROWS_AS(expr::parse("min(1)"), ParseError);
    CHECK_THROWS_AS(expr::parse("(1+2"), ParseError);
    CHECK_THROWS_AS(expr::parse("1 $ 2"), ParseError);
    try {
      expr::parse("1+2 + boo(1)");
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK(e.offset() == 6);
    }
    CHECK_THROWS_AS(eval("x1+1"), EvalError);            // unbound
    CHECK_THROWS_AS(eval("ln(0)"), EvalError);           // domain
    CHECK_THROWS_AS(eval("ln(-1)"), EvalError);
    CHECK_THROWS_AS(eval("sqrt(-1)"), EvalError);
  }

  TEST_CASE("determinism: identical inputs give bit-identical outputs") {
    const Expression e = expr::parse("sin(x1^2+t)-exp(t*x1)/(1+x1^2)");
    const std::map<std::string, double> b{{"t", 0.37}, {"x1", -1.25}};
    const double a = e.evaluate(b);
    const double c = e.evaluate(b);
    CHECK(a == c);
    const std::string slots[] = {"t", "x1"};
    const expr::Compiled compiled(e, slots);
    std::vector<double> stack(compiled.stack_need());
    const double vals[] = {0.37, -1.25};
    CHECK(compiled.eval(vals, stack) == a);
  }

  TEST_CASE("print-parse round trip is structural identity") {
    oracle::Rng rng(0xfeedbeef);
    for (int i = 0; i < 500; ++i) {
      const Expression e = random_ast(rng, 4);
      const std::string text = e.to_string();
      CAPTURE(text);
      const Expression back = expr::parse(text);
      CHECK(back.structurally_equal(e));
    }
  }

  TEST_CASE("compiled form matches tree evaluation") {
    oracle::Rng rng(0x1234);
    const std::string slots[] = {"t", "x1", "x2", "u1"};
    for (int i = 0; i < 200; ++i) {
      const Expression e = random_ast(rng, 3);
      const double t = rng.uniform(0.1, 2.0);
      const double x1 = rng.uniform(0.1, 2.0);
      const double x2 = rng.uniform(0.1, 2.0);
      const double u1 = rng.uniform(0.1, 2.0);
      const std::map<std::string, double> b{{"t", t}, {"x1", x1}, {"x2", x2}, {"u1", u1}};
      double tree = 0.0;
      bool tree_ok = true;
      try {
        tree = e.evaluate(b);
      } catch (const EvalError&) {
        tree_ok = false;
      }
      const expr::Compiled compiled(e, slots);
      std::vector<double> stack(compiled.stack_need());
      const double vals[] = {t, x1, x2, u1};
      if (tree_ok) {
        const double got = compiled.eval(vals, stack);
        if (std::isnan(tree))
          CHECK(std::isnan(got));
        else
          CHECK(got == tree);
      } else {
        CHECK_THROWS_AS(compiled.eval(vals, stack), EvalError);
      }
    }
  }

  TEST_CASE("substitute and rename") {
    const Expression e = expr::parse("y1+t*y2");
    const Expression renamed =
        e.rename_variables({{"y1", "x3"}, {"y2", "x4"}});
    CHECK(renamed.structurally_equal(expr::parse("x3+t*x4")));
    const Expression swapped = e.substitute("t", expr::parse("1-t"));
    CHECK(swapped.evaluate({{"t", 0.25}, {"y1", 2.0}, {"y2", 4.0}}) ==
          doctest::Approx(2.0 + 0.75 * 4.0));
  }
}
