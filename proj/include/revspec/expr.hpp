#pragma once

// Closed-form expressions of one real variable.
//
// Grammar (standard precedence, ^ binds tightest, then unary minus, then
// * and /, then + and -):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'] INTEGER)?
//   primary := NUMBER | VARIABLE | 'pi' | FUNC '(' expr ')' | '(' expr ')'
//   FUNC    := sqrt | sin | cos | exp | log
//
// Exponents are integer literals only. ASTs are immutable and can be shared
// freely between threads.

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace revspec {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public std::runtime_error {
 public:
  EvalError(const std::string& what, std::string subexpression);
  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

enum class BinaryOp { add, sub, mul, div };
enum class Func { sqrt, sin, cos, exp, log };

struct ExprNode;

class Expr {
 public:
  static Expr constant(double value);
  static Expr variable();
  static Expr negate(Expr operand);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr power(Expr base, int exponent);
  static Expr call(Func func, Expr argument);

  const ExprNode& node() const { return *node_; }

  double eval(double x) const;
  Expr derivative() const;
  std::string to_string(std::string_view variable = "x") const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  enum class Kind { constant, variable, negate, binary, power, call };
  Kind kind;
  double value = 0.0;  // constant
  BinaryOp op = BinaryOp::add;
  int exponent = 0;     // power
  Func func = Func::sqrt;
  std::shared_ptr<const ExprNode> lhs;  // operand / base / argument
  std::shared_ptr<const ExprNode> rhs;
};

/// Parses `text` as an expression in the single variable `variable`.
/// Throws ParseError carrying the byte offset of the offending token.
Expr parse(std::string_view text, std::string_view variable = "x");

// Free-function spellings used throughout the library.
inline double eval(const Expr& e, double x) { return e.eval(x); }
inline Expr differentiate(const Expr& e) { return e.derivative(); }
inline std::string print(const Expr& e, std::string_view variable = "x") {
  return e.to_string(variable);
}

}  // namespace revspec
