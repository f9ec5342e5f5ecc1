#include "revspec/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace revspec {

ParseError::ParseError(std::size_t offset, const std::string& what)
    : std::runtime_error("parse error at offset " + std::to_string(offset) + ": " + what),
      offset_(offset) {}

EvalError::EvalError(const std::string& what, std::string subexpression)
    : std::runtime_error(what + " in '" + subexpression + "'"),
      subexpression_(std::move(subexpression)) {}

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

const char* func_name(Func f) {
  switch (f) {
    case Func::sqrt: return "sqrt";
    case Func::sin: return "sin";
    case Func::cos: return "cos";
    case Func::exp: return "exp";
    case Func::log: return "log";
  }
  return "?";
}

// ---------------------------------------------------------------- printing

int precedence(const ExprNode& n) {
  switch (n.kind) {
    case Kind::binary:
      return (n.op == BinaryOp::add || n.op == BinaryOp::sub) ? 1 : 2;
    case Kind::negate: return 3;
    case Kind::power: return 4;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print_node(const ExprNode& n, std::string_view var, std::string& out);

void print_child(const ExprNode& child, bool paren, std::string_view var, std::string& out) {
  if (paren) out += '(';
  print_node(child, var, out);
  if (paren) out += ')';
}

void print_node(const ExprNode& n, std::string_view var, std::string& out) {
  switch (n.kind) {
    case Kind::constant:
      if (std::signbit(n.value)) {
        out += '(';
        out += format_number(n.value);
        out += ')';
      } else {
        out += format_number(n.value);
      }
      return;
    case Kind::variable:
      out += var;
      return;
    case Kind::negate:
      out += '-';
      print_child(*n.lhs, precedence(*n.lhs) < 3, var, out);
      return;
    case Kind::binary: {
      const int p = precedence(n);
      print_child(*n.lhs, precedence(*n.lhs) < p, var, out);
      switch (n.op) {
        case BinaryOp::add: out += '+'; break;
        case BinaryOp::sub: out += '-'; break;
        case BinaryOp::mul: out += '*'; break;
        case BinaryOp::div: out += '/'; break;
      }
      // Right operands at equal precedence keep their parentheses so the
      // tree shape survives a reparse.
      print_child(*n.rhs, precedence(*n.rhs) <= p, var, out);
      return;
    }
    case Kind::power:
      print_child(*n.lhs, precedence(*n.lhs) < 5 || (n.lhs->kind == Kind::constant && std::signbit(n.lhs->value)),
                  var, out);
      out += '^';
      out += std::to_string(n.exponent);
      return;
    case Kind::call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, var, out);
      out += ')';
      return;
  }
}

std::string node_text(const ExprNode& n) {
  std::string s;
  print_node(n, "x", s);
  return s;
}

// -------------------------------------------------------------- evaluation

double int_pow(double base, int n) {
  bool invert = n < 0;
  unsigned long long e = invert ? -static_cast<long long>(n) : n;
  double result = 1.0;
  double b = base;
  while (e) {
    if (e & 1ULL) result *= b;
    b *= b;
    e >>= 1;
  }
  return invert ? 1.0 / result : result;
}

double eval_node(const ExprNode& n, double x) {
  switch (n.kind) {
    case Kind::constant: return n.value;
    case Kind::variable: return x;
    case Kind::negate: return -eval_node(*n.lhs, x);
    case Kind::binary: {
      const double a = eval_node(*n.lhs, x);
      const double b = eval_node(*n.rhs, x);
      switch (n.op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
          if (b == 0.0) throw EvalError("division by zero", node_text(*n.rhs));
          return a / b;
      }
      break;
    }
    case Kind::power: {
      const double b = eval_node(*n.lhs, x);
      if (n.exponent < 0 && b == 0.0) throw EvalError("division by zero", node_text(n));
      return int_pow(b, n.exponent);
    }
    case Kind::call: {
      const double a = eval_node(*n.lhs, x);
      switch (n.func) {
        case Func::sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative argument", node_text(*n.lhs));
          return std::sqrt(a);
        case Func::sin: return std::sin(a);
        case Func::cos: return std::cos(a);
        case Func::exp: return std::exp(a);
        case Func::log:
          if (a <= 0.0) throw EvalError("log of non-positive argument", node_text(*n.lhs));
          return std::log(a);
      }
      break;
    }
  }
  return 0.0;
}

bool equal_nodes(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::constant:
      return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case Kind::variable: return true;
    case Kind::negate: return equal_nodes(*a.lhs, *b.lhs);
    case Kind::binary:
      return a.op == b.op && equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    case Kind::power: return a.exponent == b.exponent && equal_nodes(*a.lhs, *b.lhs);
    case Kind::call: return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
  }
  return false;
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::string_view text, std::string_view variable) : text_(text), var_(variable) {}

  Expr run() {
    Expr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "', expected operator or end of input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      if (accept('+')) lhs = Expr::binary(BinaryOp::add, lhs, parse_term());
      else if (accept('-')) lhs = Expr::binary(BinaryOp::sub, lhs, parse_term());
      else return lhs;
    }
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) lhs = Expr::binary(BinaryOp::mul, lhs, parse_unary());
      else if (accept('/')) lhs = Expr::binary(BinaryOp::div, lhs, parse_unary());
      else return lhs;
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Expr::negate(parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent after '^'");
    }
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
      pos_ = start;
      fail("non-integer exponent");
    }
    int value = 0;
    auto res = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (res.ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    return Expr::power(base, negative ? -value : value);
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input, expected number, variable, function or '('");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      const std::string_view ident = text_.substr(start, pos_ - start);
      if (ident == var_) return Expr::variable();
      if (ident == "pi") return Expr::constant(std::numbers::pi);
      static constexpr std::pair<std::string_view, Func> funcs[] = {
          {"sqrt", Func::sqrt}, {"sin", Func::sin}, {"cos", Func::cos},
          {"exp", Func::exp},   {"log", Func::log}};
      for (const auto& [name, func] : funcs) {
        if (ident == name) {
          if (!accept('(')) fail("expected '(' after function name '" + std::string(name) + "'");
          Expr arg = parse_expr();
          if (!accept(')')) fail("expected ')'");
          return Expr::call(func, arg);
        }
      }
      pos_ = start;
      fail("unknown identifier '" + std::string(ident) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "', expected number, variable, function or '('");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    double value = 0.0;
    auto res = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value,
                               std::chars_format::general);
    if (res.ec != std::errc()) fail("malformed number");
    pos_ = static_cast<std::size_t>(res.ptr - text_.data());
    if (pos_ == start) fail("malformed number");
    return Expr::constant(value);
  }

  std::string_view text_;
  std::string_view var_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------- derivative helpers

bool is_const(const Expr& e, double v) {
  return e.node().kind == Kind::constant && e.node().value == v;
}

Expr add(Expr a, Expr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  return Expr::binary(BinaryOp::add, a, b);
}

Expr sub(Expr a, Expr b) {
  if (is_const(b, 0.0)) return a;
  if (is_const(a, 0.0)) return Expr::negate(b);
  return Expr::binary(BinaryOp::sub, a, b);
}

Expr mul(Expr a, Expr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return Expr::constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  return Expr::binary(BinaryOp::mul, a, b);
}

Expr divide(Expr a, Expr b) {
  if (is_const(a, 0.0)) return Expr::constant(0.0);
  if (is_const(b, 1.0)) return a;
  return Expr::binary(BinaryOp::div, a, b);
}

}  // namespace

Expr Expr::constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::variable;
  return Expr(std::move(n));
}

Expr Expr::negate(Expr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::negate;
  n->lhs = operand.node_;
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::binary;
  n->op = op;
  n->lhs = lhs.node_;
  n->rhs = rhs.node_;
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::power;
  n->exponent = exponent;
  n->lhs = base.node_;
  return Expr(std::move(n));
}

Expr Expr::call(Func func, Expr argument) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Kind::call;
  n->func = func;
  n->lhs = argument.node_;
  return Expr(std::move(n));
}

double Expr::eval(double x) const { return eval_node(*node_, x); }

std::string Expr::to_string(std::string_view variable) const {
  std::string out;
  print_node(*node_, variable, out);
  return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(*a.node_, *b.node_); }

Expr Expr::derivative() const {
  const ExprNode& n = *node_;
  auto child = [](const NodePtr& p) { return Expr(p); };
  switch (n.kind) {
    case Kind::constant: return constant(0.0);
    case Kind::variable: return constant(1.0);
    case Kind::negate: {
      Expr d = child(n.lhs).derivative();
      return is_const(d, 0.0) ? d : negate(d);
    }
    case Kind::binary: {
      Expr u = child(n.lhs), v = child(n.rhs);
      Expr du = u.derivative(), dv = v.derivative();
      switch (n.op) {
        case BinaryOp::add: return add(du, dv);
        case BinaryOp::sub: return sub(du, dv);
        case BinaryOp::mul: return add(mul(du, v), mul(u, dv));
        case BinaryOp::div:
          if (is_const(dv, 0.0)) return divide(du, v);
          return divide(sub(mul(du, v), mul(u, dv)), power(v, 2));
      }
      break;
    }
    case Kind::power: {
      // n * u^(n-1) * u'; never routed through exp/log.
      if (n.exponent == 0) return constant(0.0);
      Expr u = child(n.lhs);
      Expr du = u.derivative();
      Expr lowered = n.exponent == 1 ? constant(1.0) : n.exponent == 2 ? u : power(u, n.exponent - 1);
      return mul(mul(constant(static_cast<double>(n.exponent)), lowered), du);
    }
    case Kind::call: {
      Expr u = child(n.lhs);
      Expr du = u.derivative();
      switch (n.func) {
        case Func::sqrt: return divide(du, mul(constant(2.0), *this));
        case Func::sin: return mul(call(Func::cos, u), du);
        case Func::cos: return mul(negate(call(Func::sin, u)), du);
        case Func::exp: return mul(*this, du);
        case Func::log: return divide(du, u);
      }
      break;
    }
  }
  return constant(0.0);
}

Expr parse(std::string_view text, std::string_view variable) {
  return Parser(text, variable).run();
}

}  // namespace revspec
