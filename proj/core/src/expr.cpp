#include "nonlocal/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "nonlocal/errors.hpp"

namespace nonlocal::expr {
namespace {

struct FunctionInfo {
  std::string_view name;
  Op op;
  int arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sin", Op::Sin, 1},  {"cos", Op::Cos, 1},  {"exp", Op::Exp, 1},
    {"ln", Op::Ln, 1},    {"abs", Op::Abs, 1},  {"sqrt", Op::Sqrt, 1},
    {"sgn", Op::Sgn, 1},  {"min", Op::Min, 2},  {"max", Op::Max, 2},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::string_view function_name(Op op) {
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return "?";
}

double apply_unary(Op op, double v) {
  switch (op) {
    case Op::Neg:
      return -v;
    case Op::Sin:
      return std::sin(v);
    case Op::Cos:
      return std::cos(v);
    case Op::Exp:
      return std::exp(v);
    case Op::Ln:
      if (!(v > 0.0)) throw EvalError("ln of non-positive value");
      return std::log(v);
    case Op::Abs:
      return std::fabs(v);
    case Op::Sqrt:
      if (v < 0.0) throw EvalError("sqrt of negative value");
      return std::sqrt(v);
    case Op::Sgn:
      return static_cast<double>((v > 0.0) - (v < 0.0));
    default:
      throw EvalError("not a unary operation");
  }
}

double apply_binary(Op op, double a, double b) {
  switch (op) {
    case Op::Add:
      return a + b;
    case Op::Sub:
      return a - b;
    case Op::Mul:
      return a * b;
    case Op::Div:
      return a / b;
    case Op::Pow:
      return std::pow(a, b);
    case Op::Min:
      return std::min(a, b);
    case Op::Max:
      return std::max(a, b);
    default:
      throw EvalError("not a binary operation");
  }
}

// Printer precedence; parser binding powers are aligned with these.
int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub:
      return 10;
    case Op::Mul:
    case Op::Div:
      return 20;
    case Op::Neg:
      return 25;
    case Op::Pow:
      return 30;
    default:
      return 100;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

bool is_unary(Op op) noexcept {
  switch (op) {
    case Op::Neg:
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Ln:
    case Op::Abs:
    case Op::Sqrt:
    case Op::Sgn:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) noexcept {
  switch (op) {
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
    case Op::Min:
    case Op::Max:
      return true;
    default:
      return false;
  }
}

Expression::Expression() {
  nodes_.push_back(Node{Op::Number, 0.0, {}, -1, -1});
  root_ = 0;
}

Expression Expression::number(double value) {
  if (value < 0.0) return unary(Op::Neg, number(-value));
  Expression e;
  e.nodes_.clear();
  e.nodes_.push_back(Node{Op::Number, value, {}, -1, -1});
  e.root_ = 0;
  return e;
}

Expression Expression::variable(std::string name) {
  Expression e;
  e.nodes_.clear();
  e.nodes_.push_back(Node{Op::Variable, 0.0, std::move(name), -1, -1});
  e.root_ = 0;
  return e;
}

Expression Expression::constant(Op op) {
  if (op != Op::ConstPi && op != Op::ConstE)
    throw InvalidArgument("constant() expects ConstPi or ConstE");
  Expression e;
  e.nodes_.clear();
  e.nodes_.push_back(Node{op, 0.0, {}, -1, -1});
  e.root_ = 0;
  return e;
}

std::int32_t Expression::append(const Expression& sub) {
  const auto offset = static_cast<std::int32_t>(nodes_.size());
  for (const Node& n : sub.nodes_) {
    Node copy = n;
    if (copy.lhs >= 0) copy.lhs += offset;
    if (copy.rhs >= 0) copy.rhs += offset;
    nodes_.push_back(std::move(copy));
  }
  return offset + sub.root_;
}

Expression Expression::unary(Op op, const Expression& operand) {
  if (!is_unary(op)) throw InvalidArgument("unary() got a non-unary op");
  Expression e;
  e.nodes_.clear();
  const auto child = e.append(operand);
  e.nodes_.push_back(Node{op, 0.0, {}, child, -1});
  e.root_ = static_cast<std::int32_t>(e.nodes_.size()) - 1;
  return e;
}

Expression Expression::binary(Op op, const Expression& lhs, const Expression& rhs) {
  if (!is_binary(op)) throw InvalidArgument("binary() got a non-binary op");
  Expression e;
  e.nodes_.clear();
  const auto l = e.append(lhs);
  const auto r = e.append(rhs);
  e.nodes_.push_back(Node{op, 0.0, {}, l, r});
  e.root_ = static_cast<std::int32_t>(e.nodes_.size()) - 1;
  return e;
}

bool Expression::structurally_equal(const Expression& other) const {
  auto equal = [&](auto&& self, std::int32_t a, std::int32_t b) -> bool {
    const Node& na = nodes_[static_cast<std::size_t>(a)];
    const Node& nb = other.nodes_[static_cast<std::size_t>(b)];
    if (na.op != nb.op) return false;
    switch (na.op) {
      case Op::Number:
        return na.number == nb.number;
      case Op::Variable:
        return na.name == nb.name;
      case Op::ConstPi:
      case Op::ConstE:
        return true;
      default:
        break;
    }
    if ((na.lhs >= 0) != (nb.lhs >= 0) || (na.rhs >= 0) != (nb.rhs >= 0)) return false;
    if (na.lhs >= 0 && !self(self, na.lhs, nb.lhs)) return false;
    if (na.rhs >= 0 && !self(self, na.rhs, nb.rhs)) return false;
    return true;
  };
  return equal(equal, root_, other.root_);
}

std::string Expression::to_string() const {
  std::string out;
  auto print = [&](auto&& self, std::int32_t idx) -> void {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    const int prec = precedence(n.op);
    auto child = [&](std::int32_t c, bool parens) {
      if (parens) out.push_back('(');
      self(self, c);
      if (parens) out.push_back(')');
    };
    switch (n.op) {
      case Op::Number:
        out += format_number(n.number);
        return;
      case Op::Variable:
        out += n.name;
        return;
      case Op::ConstPi:
        out += "pi";
        return;
      case Op::ConstE:
        out += "e";
        return;
      case Op::Neg:
        out.push_back('-');
        child(n.lhs, precedence(nodes_[static_cast<std::size_t>(n.lhs)].op) < prec);
        return;
      case Op::Add:
      case Op::Sub:
      case Op::Mul:
      case Op::Div: {
        const int lp = precedence(nodes_[static_cast<std::size_t>(n.lhs)].op);
        const int rp = precedence(nodes_[static_cast<std::size_t>(n.rhs)].op);
        child(n.lhs, lp < prec);
        out.push_back(n.op == Op::Add   ? '+'
                      : n.op == Op::Sub ? '-'
                      : n.op == Op::Mul ? '*'
                                        : '/');
        child(n.rhs, rp <= prec);
        return;
      }
      case Op::Pow: {
        const int lp = precedence(nodes_[static_cast<std::size_t>(n.lhs)].op);
        const int rp = precedence(nodes_[static_cast<std::size_t>(n.rhs)].op);
        child(n.lhs, lp <= prec);
        out.push_back('^');
        // A bare right operand may be Pow (right associativity) or Neg
        // ("2^-3"); lower-precedence operators need parentheses.
        child(n.rhs, rp < precedence(Op::Neg));
        return;
      }
      default: {
        out += function_name(n.op);
        out.push_back('(');
        self(self, n.lhs);
        if (n.rhs >= 0) {
          out.push_back(',');
          self(self, n.rhs);
        }
        out.push_back(')');
        return;
      }
    }
  };
  print(print, root_);
  return out;
}

std::vector<std::string> Expression::variables() const {
  std::set<std::string> names;
  for (const Node& n : nodes_) {
    if (n.op == Op::Variable) names.insert(n.name);
  }
  return {names.begin(), names.end()};
}

double Expression::evaluate(const std::map<std::string, double>& bindings) const {
  auto eval = [&](auto&& self, std::int32_t idx) -> double {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::Number:
        return n.number;
      case Op::Variable: {
        const auto it = bindings.find(n.name);
        if (it == bindings.end()) throw EvalError("unbound variable '" + n.name + "'");
        return it->second;
      }
      case Op::ConstPi:
        return std::numbers::pi;
      case Op::ConstE:
        return std::numbers::e;
      default:
        break;
    }
    const double a = self(self, n.lhs);
    if (n.rhs < 0) return apply_unary(n.op, a);
    return apply_binary(n.op, a, self(self, n.rhs));
  };
  return eval(eval, root_);
}

Expression Expression::substitute(const std::string& name, const Expression& replacement) const {
  auto rebuild = [&](auto&& self, std::int32_t idx) -> Expression {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::Number:
        return Expression::number(n.number);
      case Op::Variable:
        return n.name == name ? replacement : Expression::variable(n.name);
      case Op::ConstPi:
      case Op::ConstE:
        return Expression::constant(n.op);
      default:
        break;
    }
    if (n.rhs < 0) return Expression::unary(n.op, self(self, n.lhs));
    return Expression::binary(n.op, self(self, n.lhs), self(self, n.rhs));
  };
  return rebuild(rebuild, root_);
}

Expression Expression::rename_variables(const std::map<std::string, std::string>& renames) const {
  auto rebuild = [&](auto&& self, std::int32_t idx) -> Expression {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::Number:
        return Expression::number(n.number);
      case Op::Variable: {
        const auto it = renames.find(n.name);
        return Expression::variable(it == renames.end() ? n.name : it->second);
      }
      case Op::ConstPi:
      case Op::ConstE:
        return Expression::constant(n.op);
      default:
        break;
    }
    if (n.rhs < 0) return Expression::unary(n.op, self(self, n.lhs));
    return Expression::binary(n.op, self(self, n.lhs), self(self, n.rhs));
  };
  return rebuild(rebuild, root_);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
  std::string_view text = {};
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const noexcept { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

private:
  void advance() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= text_.size()) {
      current_ = {Tok::End, start};
      return;
    }
    const char c = text_[pos_];
    switch (c) {
      case '+': current_ = {Tok::Plus, start}; ++pos_; return;
      case '-': current_ = {Tok::Minus, start}; ++pos_; return;
      case '*': current_ = {Tok::Star, start}; ++pos_; return;
      case '/': current_ = {Tok::Slash, start}; ++pos_; return;
      case '^': current_ = {Tok::Caret, start}; ++pos_; return;
      case '(': current_ = {Tok::LParen, start}; ++pos_; return;
      case ')': current_ = {Tok::RParen, start}; ++pos_; return;
      case ',': current_ = {Tok::Comma, start}; ++pos_; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      if (end < text_.size() && text_[end] == '.') {
        ++end;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
      if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
        std::size_t exp = end + 1;
        if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
        if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
          ++exp;
          while (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) ++exp;
          end = exp;
        }
      }
      double value = 0.0;
      const auto res = std::from_chars(text_.data() + pos_, text_.data() + end, value);
      if (res.ec != std::errc{}) throw ParseError("malformed number literal", start);
      current_ = {Tok::Number, start, value, text_.substr(pos_, end - pos_)};
      pos_ = end;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      current_ = {Tok::Ident, start, 0.0, text_.substr(pos_, end - pos_)};
      pos_ = end;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token current_{Tok::End, 0};
};

class Parser {
public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Expression run() {
    Expression e = parse_expr(0);
    const Token& t = lex_.peek();
    if (t.kind != Tok::End) throw ParseError("unexpected trailing input", t.offset);
    return e;
  }

private:
  static constexpr int kUnaryBp = 25;

  static int left_bp(Tok kind) {
    switch (kind) {
      case Tok::Plus:
      case Tok::Minus:
        return 10;
      case Tok::Star:
      case Tok::Slash:
        return 20;
      case Tok::Caret:
        return 30;
      default:
        return -1;
    }
  }

  Expression parse_expr(int min_bp) {
    Expression lhs = parse_prefix();
    for (;;) {
      const Token& t = lex_.peek();
      const int bp = left_bp(t.kind);
      if (bp <= min_bp) break;
      const Tok kind = lex_.take().kind;
      // ^ is right-associative: its right operand re-admits ^ itself.
      const int rhs_bp = kind == Tok::Caret ? bp - 1 : bp;
      Expression rhs = parse_expr(rhs_bp);
      const Op op = kind == Tok::Plus    ? Op::Add
                    : kind == Tok::Minus ? Op::Sub
                    : kind == Tok::Star  ? Op::Mul
                    : kind == Tok::Slash ? Op::Div
                                         : Op::Pow;
      lhs = Expression::binary(op, lhs, rhs);
    }
    return lhs;
  }

  Expression parse_prefix() {
    const Token t = lex_.take();
    switch (t.kind) {
      case Tok::Number:
        return Expression::number(t.number);
      case Tok::Minus:
        return Expression::unary(Op::Neg, parse_expr(kUnaryBp));
      case Tok::LParen: {
        Expression e = parse_expr(0);
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::Ident: {
        if (lex_.peek().kind == Tok::LParen) {
          const FunctionInfo* fn = find_function(t.text);
          if (fn == nullptr)
            throw ParseError("unknown function name '" + std::string(t.text) + "'", t.offset);
          lex_.take();  // '('
          Expression first = parse_expr(0);
          if (fn->arity == 1) {
            expect(Tok::RParen, "expected ')'");
            return Expression::unary(fn->op, first);
          }
          expect(Tok::Comma, "expected ',' between arguments");
          Expression second = parse_expr(0);
          expect(Tok::RParen, "expected ')'");
          return Expression::binary(fn->op, first, second);
        }
        if (t.text == "pi") return Expression::constant(Op::ConstPi);
        if (t.text == "e") return Expression::constant(Op::ConstE);
        return Expression::variable(std::string(t.text));
      }
      default:
        throw ParseError("expected an operand", t.offset);
    }
  }

  void expect(Tok kind, const char* message) {
    const Token t = lex_.take();
    if (t.kind != kind) throw ParseError(message, t.offset);
  }

  Lexer lex_;
};

}  // namespace

Expression parse(std::string_view text) {
  if (text.empty()) throw ParseError("empty expression", 0);
  return Parser(text).run();
}

// ---------------------------------------------------------------------------
// Compiled form

Compiled::Compiled(const Expression& e, std::span<const std::string> slot_names) {
  const auto& nodes = e.nodes();
  auto flatten = [&](auto&& self, std::int32_t idx) -> void {
    const Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.op) {
      case Op::Number:
        program_.push_back({Op::Number, n.number, -1});
        break;
      case Op::ConstPi:
        program_.push_back({Op::Number, std::numbers::pi, -1});
        break;
      case Op::ConstE:
        program_.push_back({Op::Number, std::numbers::e, -1});
        break;
      case Op::Variable: {
        const auto it = std::find(slot_names.begin(), slot_names.end(), n.name);
        if (it == slot_names.end())
          throw EvalError("unbound variable '" + n.name + "'");
        program_.push_back(
            {Op::Variable, 0.0, static_cast<std::int32_t>(it - slot_names.begin())});
        break;
      }
      default:
        self(self, n.lhs);
        if (n.rhs >= 0) self(self, n.rhs);
        program_.push_back({n.op, 0.0, -1});
        break;
    }
  };
  flatten(flatten, e.root());

  std::size_t depth = 0, max_depth = 0;
  for (const Ins& ins : program_) {
    if (ins.op == Op::Number || ins.op == Op::Variable)
      ++depth;
    else if (is_binary(ins.op))
      --depth;
    max_depth = std::max(max_depth, depth);
  }
  stack_need_ = std::max<std::size_t>(max_depth, 1);
}

double Compiled::eval(std::span<const double> slots, std::span<double> stack) const {
  std::size_t top = 0;
  for (const Ins& ins : program_) {
    switch (ins.op) {
      case Op::Number:
        stack[top++] = ins.number;
        break;
      case Op::Variable:
        stack[top++] = slots[static_cast<std::size_t>(ins.slot)];
        break;
      default:
        if (is_binary(ins.op)) {
          const double b = stack[--top];
          const double a = stack[top - 1];
          stack[top - 1] = apply_binary(ins.op, a, b);
        } else {
          stack[top - 1] = apply_unary(ins.op, stack[top - 1]);
        }
        break;
    }
  }
  return stack[0];
}

}  // namespace nonlocal::expr
