#pragma once

// Scalar field expressions over a coordinate chart.
//
// An Expr is an immutable, shareable expression DAG. Variables are stored by
// chart index (for evaluation) and by name (for printing and diagnostics).
// Builders perform light constant folding and identity elimination only; no
// algebraic simplification is attempted.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sollab {

enum class Op {
  Constant,
  Variable,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  PowInt,   // integer exponent, evaluated by repeated multiplication
  PowReal,  // constant non-integer exponent, base must be positive
  Pow,      // expression exponent, base must be positive
  Exp,
  Ln,
  Sin,
  Cos,
  Sqrt,
  Integral  // integral of a univariate integrand from `value` to args[0]
};

class Expr;

struct Node {
  Op op = Op::Constant;
  double value = 0.0;       // Constant: the value; PowReal: exponent; Integral: lower limit
  int exponent = 0;         // PowInt
  std::size_t index = 0;    // Variable: chart index
  std::string name;         // Variable: chart name
  double tolerance = 0.0;   // Integral: absolute quadrature tolerance
  std::vector<Expr> args;   // operands, in source order
  std::shared_ptr<const Node> integrand;  // Integral: field over a one-coordinate chart
};

class Expr {
public:
  Expr();  // the constant 0
  explicit Expr(std::shared_ptr<const Node> node);

  static Expr constant(double v);
  static Expr variable(std::size_t index, std::string name);

  const Node& node() const noexcept { return *node_; }
  const Node* get() const noexcept { return node_.get(); }
  std::shared_ptr<const Node> share() const noexcept { return node_; }

  Op op() const noexcept { return node_->op; }
  bool is_constant() const noexcept { return node_->op == Op::Constant; }
  bool is_constant(double v) const noexcept { return is_constant() && node_->value == v; }

private:
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

Expr operator+(double a, const Expr& b);
Expr operator+(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator/(double a, const Expr& b);
Expr operator/(const Expr& a, double b);

Expr pow(const Expr& base, int exponent);
Expr pow(const Expr& base, double exponent);
Expr pow(const Expr& base, const Expr& exponent);
Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr sqrt(const Expr& a);

// Antiderivative node: integral of `integrand` (a field over a one-coordinate
// chart, variable index 0) from `lower` to `upper`. Derivatives with respect to
// the upper limit are exact; the value comes from adaptive quadrature.
Expr integral(const Expr& integrand, double lower, const Expr& upper, double tolerance = 1e-10);

// Parses `source` against the chart variable names. Grammar:
//   expr  := term (('+'|'-') term)*
//   term  := unary (('*'|'/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr ')' | '(' expr ')'
// Throws SyntaxError (with byte offset) or UnknownVariable.
Expr parse_expression(std::string_view source, std::span<const std::string> chart_vars);

// Minimal-parenthesis rendering; parse(to_string(parse(s))) is structurally
// identical to parse(s). Integral nodes render as quad(...) which is not part
// of the input grammar.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

// Plain double evaluation; independent of the jet machinery.
double evaluate(const Expr& e, std::span<const double> point);

// Symbolic partial derivative with respect to chart variable `index`.
Expr differentiate(const Expr& e, std::size_t index);

// Replaces every Variable(i) by replacements[i].
Expr substitute(const Expr& e, std::span<const Expr> replacements);

// Moves the expression onto a larger chart: variable i becomes variable
// offset + i with name new_names[offset + i].
Expr shift_variables(const Expr& e, std::size_t offset, std::span<const std::string> new_names);

bool depends_on(const Expr& e, std::size_t index);

// Largest variable index referenced plus one (0 for constant expressions).
std::size_t variable_extent(const Expr& e);

}  // namespace sollab
