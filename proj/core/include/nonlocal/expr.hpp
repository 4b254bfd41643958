#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nonlocal::expr {

/// Node kinds of the expression AST. Binary operators are left-associative
/// except Pow, which is right-associative and binds tighter than unary minus.
enum class Op : std::uint8_t {
  Number,
  Variable,
  ConstPi,
  ConstE,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sin,
  Cos,
  Exp,
  Ln,
  Abs,
  Sqrt,
  Sgn,
  Min,
  Max,
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

struct Node {
  Op op = Op::Number;
  double number = 0.0;    // Op::Number payload
  std::string name;       // Op::Variable payload
  std::int32_t lhs = -1;  // child indices into the owning arena
  std::int32_t rhs = -1;
};

/// Immutable scalar expression over variables, +-*/^, unary minus, the
/// function set {sin, cos, exp, ln, abs, sqrt, sgn, min, max} and the
/// constants pi and e. Built by parse() or the programmatic constructors.
class Expression {
public:
  /// Constant zero.
  Expression();

  static Expression number(double value);
  static Expression variable(std::string name);
  static Expression constant(Op op);  // ConstPi or ConstE
  static Expression unary(Op op, const Expression& operand);
  static Expression binary(Op op, const Expression& lhs, const Expression& rhs);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::int32_t root() const noexcept { return root_; }

  bool structurally_equal(const Expression& other) const;

  /// Prints with the minimal parentheses needed so that parse(to_string())
  /// reproduces the tree exactly.
  std::string to_string() const;

  /// Sorted, de-duplicated variable names referenced by the expression.
  std::vector<std::string> variables() const;

  /// Tree-walking evaluation. Throws EvalError on unbound variables and on
  /// domain violations (ln of non-positive, sqrt of negative).
  double evaluate(const std::map<std::string, double>& bindings) const;

  /// Replaces every occurrence of `name` by `replacement`.
  Expression substitute(const std::string& name, const Expression& replacement) const;

  /// Renames variables; names absent from the map are left alone.
  Expression rename_variables(const std::map<std::string, std::string>& renames) const;

private:
  friend Expression parse(std::string_view);
  std::int32_t append(const Expression& sub);  // copies sub's nodes into this arena

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

/// Recursive-descent (Pratt) parser. Precedence: ^ > unary - > * / > + -,
/// with + - * / left-associative and ^ right-associative.
/// Throws ParseError with the byte offset of the failure.
Expression parse(std::string_view text);

/// Expression compiled against a fixed slot layout: variable references become
/// indices into a value array, so evaluation is allocation-free. Used on hot
/// paths (RK4 stages, boundary maps, densities).
class Compiled {
public:
  Compiled() = default;

  /// Throws EvalError if the expression references a name not in slot_names.
  Compiled(const Expression& e, std::span<const std::string> slot_names);

  /// `stack` must have room for stack_need() doubles; its contents are scratch.
  double eval(std::span<const double> slots, std::span<double> stack) const;

  std::size_t stack_need() const noexcept { return stack_need_; }

private:
  struct Ins {
    Op op;
    double number;      // Op::Number
    std::int32_t slot;  // Op::Variable
  };
  std::vector<Ins> program_;
  std::size_t stack_need_ = 0;
};

}  // namespace nonlocal::expr
