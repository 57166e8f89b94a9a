#include "sollab/expr.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "sollab/errors.hpp"
#include "sollab/quadrature.hpp"

namespace sollab {
namespace {

Expr make(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr make_binary(Op op, const Expr& a, const Expr& b) {
  Node n;
  n.op = op;
  n.args = {a, b};
  return make(std::move(n));
}

Expr make_unary(Op op, const Expr& a) {
  Node n;
  n.op = op;
  n.args = {a};
  return make(std::move(n));
}

// Folds only when the result stays finite, so "1/0" survives to evaluation
// where it raises a DomainError naming the node.
bool foldable(double v) { return std::isfinite(v); }

double int_power(double base, int n) {
  double result = 1.0;
  const bool negative = n < 0;
  unsigned k = negative ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  double b = base;
  while (k != 0) {
    if (k & 1U) result *= b;
    b *= b;
    k >>= 1U;
  }
  return negative ? 1.0 / result : result;
}

Expr fold_unary(Op op, const Expr& a, double (*fn)(double)) {
  if (a.is_constant()) {
    const double v = fn(a.node().value);
    if (foldable(v)) return Expr::constant(v);
  }
  return make_unary(op, a);
}

}  // namespace

Expr::Expr() : Expr(constant(0.0)) {}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double v) {
  Node n;
  n.op = Op::Constant;
  n.value = v;
  return make(std::move(n));
}

Expr Expr::variable(std::size_t index, std::string name) {
  Node n;
  n.op = Op::Variable;
  n.index = index;
  n.name = std::move(name);
  return make(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.node().value + b.node().value)) {
    return Expr::constant(a.node().value + b.node().value);
  }
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return make_binary(Op::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.node().value - b.node().value)) {
    return Expr::constant(a.node().value - b.node().value);
  }
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return make_binary(Op::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.node().value * b.node().value)) {
    return Expr::constant(a.node().value * b.node().value);
  }
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return make_binary(Op::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && foldable(a.node().value / b.node().value)) {
    return Expr::constant(a.node().value / b.node().value);
  }
  if (a.is_constant(0.0) && !b.is_constant()) return Expr::constant(0.0);
  if (b.is_constant(1.0)) return a;
  if (!a.is_constant() && structurally_equal(a, b)) return Expr::constant(1.0);
  return make_binary(Op::Div, a, b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.node().value);
  if (a.op() == Op::Neg) return a.node().args[0];
  return make_unary(Op::Neg, a);
}

Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator/(double a, const Expr& b) { return Expr::constant(a) / b; }
Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant()) {
    const double v = int_power(base.node().value, exponent);
    if (foldable(v)) return Expr::constant(v);
  }
  Node n;
  n.op = Op::PowInt;
  n.exponent = exponent;
  n.args = {base};
  return make(std::move(n));
}

Expr pow(const Expr& base, double exponent) {
  if (std::nearbyint(exponent) == exponent && std::abs(exponent) < 1e6) {
    return pow(base, static_cast<int>(exponent));
  }
  if (base.is_constant() && base.node().value > 0.0) {
    const double v = std::pow(base.node().value, exponent);
    if (foldable(v)) return Expr::constant(v);
  }
  Node n;
  n.op = Op::PowReal;
  n.value = exponent;
  n.args = {base};
  return make(std::move(n));
}

Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_constant()) return pow(base, exponent.node().value);
  return make_binary(Op::Pow, base, exponent);
}

Expr exp(const Expr& a) { return fold_unary(Op::Exp, a, [](double v) { return std::exp(v); }); }

Expr ln(const Expr& a) {
  if (a.is_constant() && a.node().value > 0.0) return Expr::constant(std::log(a.node().value));
  return make_unary(Op::Ln, a);
}

Expr sin(const Expr& a) { return fold_unary(Op::Sin, a, [](double v) { return std::sin(v); }); }
Expr cos(const Expr& a) { return fold_unary(Op::Cos, a, [](double v) { return std::cos(v); }); }

Expr sqrt(const Expr& a) {
  if (a.is_constant() && a.node().value >= 0.0) return Expr::constant(std::sqrt(a.node().value));
  return make_unary(Op::Sqrt, a);
}

Expr integral(const Expr& integrand, double lower, const Expr& upper, double tolerance) {
  if (variable_extent(integrand) > 1) {
    throw PreconditionError("integrand must be a field over a single coordinate");
  }
  Node n;
  n.op = Op::Integral;
  n.value = lower;
  n.tolerance = tolerance;
  n.args = {upper};
  n.integrand = integrand.share();
  return make(std::move(n));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_function_name(std::string_view s) {
  return s == "exp" || s == "ln" || s == "sin" || s == "cos" || s == "sqrt";
}

Expr apply_function(std::string_view name, const Expr& arg) {
  if (name == "exp") return exp(arg);
  if (name == "ln") return ln(arg);
  if (name == "sin") return sin(arg);
  if (name == "cos") return cos(arg);
  return sqrt(arg);
}

class Parser {
public:
  Parser(std::string_view src, std::span<const std::string> vars) : src_(src), vars_(vars) {}

  Expr parse() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("empty expression", pos_);
    Expr e = expr();
    skip_ws();
    if (pos_ < src_.size()) {
      throw SyntaxError(std::string("unexpected '") + src_[pos_] + "'", pos_);
    }
    return e;
  }

private:
  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) {
        throw SyntaxError(std::string("expected '") + c + "' but input ended", pos_);
      }
      throw SyntaxError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = lhs + term();
      } else if (accept('-')) {
        lhs = lhs - term();
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = lhs * unary();
      } else if (accept('/')) {
        lhs = lhs / unary();
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
  }

  Expr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    double v = 0.0;
    const auto* first = src_.data() + start;
    const auto* last = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw SyntaxError("malformed number", start);
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    skip_ws();
    const bool call = pos_ < src_.size() && src_[pos_] == '(';
    if (is_function_name(name)) {
      if (!call) throw SyntaxError("expected '(' after '" + std::string(name) + "'", pos_);
      ++pos_;
      Expr arg = expr();
      expect(')');
      return apply_function(name, arg);
    }
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) {
      if (call) throw SyntaxError("unknown function '" + std::string(name) + "'", start);
      throw UnknownVariable(std::string(name));
    }
    if (call) throw SyntaxError("variable '" + std::string(name) + "' is not a function", pos_);
    return Expr::variable(static_cast<std::size_t>(it - vars_.begin()), std::string(name));
  }
};

}  // namespace

Expr parse_expression(std::string_view source, std::span<const std::string> chart_vars) {
  return Parser(source, chart_vars).parse();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Prec : int { kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

const char* function_name(Op op) {
  switch (op) {
    case Op::Exp: return "exp";
    case Op::Ln: return "ln";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Sqrt: return "sqrt";
    default: return "?";
  }
}

std::string render(const Expr& e, int min_prec);

std::string wrap(std::string s, int prec, int min_prec) {
  return prec < min_prec ? "(" + s + ")" : s;
}

std::string render(const Expr& e, int min_prec) {
  const Node& n = e.node();
  switch (n.op) {
    case Op::Constant:
      if (std::signbit(n.value)) return wrap(format_number(n.value), kUnary, min_prec);
      return format_number(n.value);
    case Op::Variable:
      return n.name;
    case Op::Add:
      return wrap(render(n.args[0], kAdd) + " + " + render(n.args[1], kMul), kAdd, min_prec);
    case Op::Sub:
      return wrap(render(n.args[0], kAdd) + " - " + render(n.args[1], kMul), kAdd, min_prec);
    case Op::Mul:
      return wrap(render(n.args[0], kMul) + "*" + render(n.args[1], kUnary), kMul, min_prec);
    case Op::Div:
      return wrap(render(n.args[0], kMul) + "/" + render(n.args[1], kUnary), kMul, min_prec);
    case Op::Neg:
      return wrap("-" + render(n.args[0], kUnary), kUnary, min_prec);
    case Op::PowInt:
      return wrap(render(n.args[0], kAtom) + "^" + std::to_string(n.exponent), kPow, min_prec);
    case Op::PowReal:
      return wrap(render(n.args[0], kAtom) + "^" + format_number(n.value), kPow, min_prec);
    case Op::Pow:
      return wrap(render(n.args[0], kAtom) + "^" + render(n.args[1], kUnary), kPow, min_prec);
    case Op::Exp:
    case Op::Ln:
    case Op::Sin:
    case Op::Cos:
    case Op::Sqrt:
      return std::string(function_name(n.op)) + "(" + render(n.args[0], 0) + ")";
    case Op::Integral: {
      const Expr integrand(n.integrand);
      return "quad(" + render(integrand, 0) + ", " + format_number(n.value) + ", " +
             render(n.args[0], 0) + ")";
    }
  }
  return "?";
}

}  // namespace

std::string to_string(const Expr& e) { return render(e, 0); }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  const Node& x = a.node();
  const Node& y = b.node();
  if (x.op != y.op || x.args.size() != y.args.size()) return false;
  switch (x.op) {
    case Op::Constant:
      // Bitwise identity, so -0 and +0 differ.
      return std::signbit(x.value) == std::signbit(y.value) && x.value == y.value;
    case Op::Variable:
      return x.index == y.index && x.name == y.name;
    case Op::PowInt:
      if (x.exponent != y.exponent) return false;
      break;
    case Op::PowReal:
      if (x.value != y.value) return false;
      break;
    case Op::Integral:
      if (x.value != y.value || x.tolerance != y.tolerance ||
          !structurally_equal(Expr(x.integrand), Expr(y.integrand))) {
        return false;
      }
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!structurally_equal(x.args[i], y.args[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Plain evaluation

namespace {

[[noreturn]] void domain_failure(const Expr& e, std::span<const double> point, const char* what) {
  std::ostringstream msg;
  msg << what << " in node '" << to_string(e) << "' at point (";
  for (std::size_t i = 0; i < point.size(); ++i) msg << (i ? ", " : "") << point[i];
  msg << ")";
  throw DomainError(msg.str());
}

double eval_node(const Expr& e, std::span<const double> p) {
  const Node& n = e.node();
  auto arg = [&](std::size_t i) { return eval_node(n.args[i], p); };
  double v = 0.0;
  switch (n.op) {
    case Op::Constant: return n.value;
    case Op::Variable:
      if (n.index >= p.size()) domain_failure(e, p, "variable outside the chart");
      return p[n.index];
    case Op::Add: v = arg(0) + arg(1); break;
    case Op::Sub: v = arg(0) - arg(1); break;
    case Op::Mul: v = arg(0) * arg(1); break;
    case Op::Div: {
      const double den = arg(1);
      if (den == 0.0) domain_failure(e, p, "division by zero");
      v = arg(0) / den;
      break;
    }
    case Op::Neg: return -arg(0);
    case Op::PowInt: {
      const double base = arg(0);
      if (base == 0.0 && n.exponent < 0) domain_failure(e, p, "negative power of zero");
      v = int_power(base, n.exponent);
      break;
    }
    case Op::PowReal: {
      const double base = arg(0);
      if (base <= 0.0) domain_failure(e, p, "non-integer power of non-positive base");
      v = std::pow(base, n.value);
      break;
    }
    case Op::Pow: {
      const double base = arg(0);
      if (base <= 0.0) domain_failure(e, p, "variable power of non-positive base");
      v = std::pow(base, arg(1));
      break;
    }
    case Op::Exp: v = std::exp(arg(0)); break;
    case Op::Ln: {
      const double a = arg(0);
      if (a <= 0.0) domain_failure(e, p, "logarithm of non-positive argument");
      v = std::log(a);
      break;
    }
    case Op::Sin: v = std::sin(arg(0)); break;
    case Op::Cos: v = std::cos(arg(0)); break;
    case Op::Sqrt: {
      const double a = arg(0);
      if (a <= 0.0) domain_failure(e, p, "square root of non-positive argument");
      v = std::sqrt(a);
      break;
    }
    case Op::Integral: {
      const Expr integrand(n.integrand);
      auto f = [&](double s) {
        const std::array<double, 1> q{s};
        return eval_node(integrand, q);
      };
      v = adaptive_simpson(f, n.value, arg(0), QuadratureOptions{n.tolerance, 40});
      break;
    }
  }
  if (!std::isfinite(v)) domain_failure(e, p, "non-finite value");
  return v;
}

}  // namespace

double evaluate(const Expr& e, std::span<const double> point) { return eval_node(e, point); }

// ---------------------------------------------------------------------------
// Transformations

namespace {

class Substituter {
public:
  explicit Substituter(std::span<const Expr> reps) : reps_(reps) {}

  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr out = build(e);
    memo_.emplace(e.get(), out);
    return out;
  }

private:
  std::span<const Expr> reps_;
  std::unordered_map<const Node*, Expr> memo_;

  Expr build(const Expr& e) {
    const Node& n = e.node();
    switch (n.op) {
      case Op::Constant: return e;
      case Op::Variable:
        if (n.index >= reps_.size()) {
          throw PreconditionError("substitution does not cover variable '" + n.name + "'");
        }
        return reps_[n.index];
      case Op::Add: return run(n.args[0]) + run(n.args[1]);
      case Op::Sub: return run(n.args[0]) - run(n.args[1]);
      case Op::Mul: return run(n.args[0]) * run(n.args[1]);
      case Op::Div: return run(n.args[0]) / run(n.args[1]);
      case Op::Neg: return -run(n.args[0]);
      case Op::PowInt: return pow(run(n.args[0]), n.exponent);
      case Op::PowReal: return pow(run(n.args[0]), n.value);
      case Op::Pow: return pow(run(n.args[0]), run(n.args[1]));
      case Op::Exp: return exp(run(n.args[0]));
      case Op::Ln: return ln(run(n.args[0]));
      case Op::Sin: return sin(run(n.args[0]));
      case Op::Cos: return cos(run(n.args[0]));
      case Op::Sqrt: return sqrt(run(n.args[0]));
      case Op::Integral: return integral(Expr(n.integrand), n.value, run(n.args[0]), n.tolerance);
    }
    return e;
  }
};

class Differentiator {
public:
  explicit Differentiator(std::size_t index) : index_(index) {}

  Expr run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr out = build(e);
    memo_.emplace(e.get(), out);
    return out;
  }

private:
  std::size_t index_;
  std::unordered_map<const Node*, Expr> memo_;

  Expr build(const Expr& e) {
    const Node& n = e.node();
    const auto& a = n.args;
    switch (n.op) {
      case Op::Constant: return Expr::constant(0.0);
      case Op::Variable: return Expr::constant(n.index == index_ ? 1.0 : 0.0);
      case Op::Add: return run(a[0]) + run(a[1]);
      case Op::Sub: return run(a[0]) - run(a[1]);
      case Op::Mul: return run(a[0]) * a[1] + a[0] * run(a[1]);
      case Op::Div: return (run(a[0]) * a[1] - a[0] * run(a[1])) / pow(a[1], 2);
      case Op::Neg: return -run(a[0]);
      case Op::PowInt:
        return Expr::constant(n.exponent) * pow(a[0], n.exponent - 1) * run(a[0]);
      case Op::PowReal: return Expr::constant(n.value) * pow(a[0], n.value - 1.0) * run(a[0]);
      case Op::Pow: return e * (run(a[1]) * ln(a[0]) + a[1] * run(a[0]) / a[0]);
      case Op::Exp: return e * run(a[0]);
      case Op::Ln: return run(a[0]) / a[0];
      case Op::Sin: return cos(a[0]) * run(a[0]);
      case Op::Cos: return -(sin(a[0]) * run(a[0]));
      case Op::Sqrt: return run(a[0]) / (2.0 * e);
      case Op::Integral: {
        const std::array<Expr, 1> reps{a[0]};
        return substitute(Expr(n.integrand), reps) * run(a[0]);
      }
    }
    return Expr::constant(0.0);
  }
};

void collect_extent(const Expr& e, std::size_t& extent) {
  const Node& n = e.node();
  if (n.op == Op::Variable) extent = std::max(extent, n.index + 1);
  for (const auto& c : n.args) collect_extent(c, extent);
}

}  // namespace

Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  return Substituter(replacements).run(e);
}

Expr differentiate(const Expr& e, std::size_t index) { return Differentiator(index).run(e); }

Expr shift_variables(const Expr& e, std::size_t offset, std::span<const std::string> new_names) {
  const std::size_t extent = variable_extent(e);
  if (offset + extent > new_names.size()) {
    throw PreconditionError("target chart too small for shifted expression");
  }
  std::vector<Expr> reps;
  reps.reserve(extent);
  for (std::size_t i = 0; i < extent; ++i) {
    reps.push_back(Expr::variable(offset + i, new_names[offset + i]));
  }
  return substitute(e, reps);
}

bool depends_on(const Expr& e, std::size_t index) {
  const Node& n = e.node();
  if (n.op == Op::Variable) return n.index == index;
  return std::any_of(n.args.begin(), n.args.end(),
                     [index](const Expr& c) { return depends_on(c, index); });
}

std::size_t variable_extent(const Expr& e) {
  std::size_t extent = 0;
  collect_extent(e, extent);
  return extent;
}

}  // namespace sollab
