#include "sollab/jet.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "sollab/errors.hpp"
#include "sollab/quadrature.hpp"

namespace sollab {

CoordinatePoint::CoordinatePoint(std::initializer_list<double> coords)
    : CoordinatePoint(std::vector<double>(coords)) {}

CoordinatePoint::CoordinatePoint(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw PreconditionError("coordinate point must have at least one entry");
  for (double c : coords_) {
    if (!std::isfinite(c)) throw PreconditionError("coordinate point has a non-finite entry");
  }
}

CoordinatePoint concat(const CoordinatePoint& a, const CoordinatePoint& b) {
  std::vector<double> all(a.coords_);
  all.insert(all.end(), b.coords_.begin(), b.coords_.end());
  return CoordinatePoint(std::move(all));
}

Jet2 Jet2::constant(double v, std::size_t n) {
  return Jet2{v, Vector::Zero(static_cast<Eigen::Index>(n)),
              Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
}

namespace {

using Index = Eigen::Index;

// F(u) with F, F', F'' evaluated at u.value.
Jet2 chain(const Jet2& u, double f0, double f1, double f2) {
  const Index n = u.gradient.size();
  Jet2 r{f0, f1 * u.gradient, Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double h = f2 * u.gradient(i) * u.gradient(j) + f1 * u.hessian(i, j);
      r.hessian(i, j) = h;
      r.hessian(j, i) = h;
    }
  }
  return r;
}

Jet2 add(const Jet2& a, const Jet2& b, double sign) {
  const Index n = a.gradient.size();
  Jet2 r{a.value + sign * b.value, a.gradient + sign * b.gradient, Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double h = a.hessian(i, j) + sign * b.hessian(i, j);
      r.hessian(i, j) = h;
      r.hessian(j, i) = h;
    }
  }
  return r;
}

Jet2 mul(const Jet2& a, const Jet2& b) {
  const Index n = a.gradient.size();
  Jet2 r{a.value * b.value, b.value * a.gradient + a.value * b.gradient, Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double h = b.value * a.hessian(i, j) + a.value * b.hessian(i, j) +
                       (a.gradient(i) * b.gradient(j) + b.gradient(i) * a.gradient(j));
      r.hessian(i, j) = h;
      r.hessian(j, i) = h;
    }
  }
  return r;
}

Jet2 neg(const Jet2& a) { return Jet2{-a.value, -a.gradient, -a.hessian}; }

Jet2 recip(const Jet2& a) {
  const double v = 1.0 / a.value;
  return chain(a, v, -v * v, 2.0 * v * v * v);
}

Jet2 int_pow(const Jet2& base, int n) {
  const bool negative = n < 0;
  unsigned k = negative ? static_cast<unsigned>(-static_cast<long>(n)) : static_cast<unsigned>(n);
  Jet2 result = Jet2::constant(1.0, static_cast<std::size_t>(base.gradient.size()));
  Jet2 b = base;
  bool first = true;
  while (k != 0) {
    if (k & 1U) {
      result = first ? b : mul(result, b);
      first = false;
    }
    k >>= 1U;
    if (k != 0) b = mul(b, b);
  }
  return negative ? recip(result) : result;
}

bool finite(const Jet2& j) {
  return std::isfinite(j.value) && j.gradient.allFinite() && j.hessian.allFinite();
}

class JetEvaluator {
public:
  explicit JetEvaluator(const CoordinatePoint& p) : p_(p) {}

  Jet2 run(const Expr& e) {
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Jet2 r = build(e);
    if (!finite(r)) fail(e, "non-finite derivative");
    memo_.emplace(e.get(), r);
    return r;
  }

private:
  const CoordinatePoint& p_;
  std::unordered_map<const Node*, Jet2> memo_;

  [[noreturn]] void fail(const Expr& e, const char* what) const {
    std::ostringstream msg;
    msg << what << " in node '" << to_string(e) << "' at point (";
    for (std::size_t i = 0; i < p_.dim(); ++i) msg << (i ? ", " : "") << p_[i];
    msg << ")";
    throw DomainError(msg.str());
  }

  Jet2 build(const Expr& e) {
    const Node& n = e.node();
    const std::size_t dim = p_.dim();
    switch (n.op) {
      case Op::Constant: return Jet2::constant(n.value, dim);
      case Op::Variable: {
        if (n.index >= dim) fail(e, "variable outside the chart");
        Jet2 r = Jet2::constant(p_[n.index], dim);
        r.gradient(static_cast<Index>(n.index)) = 1.0;
        return r;
      }
      case Op::Add: return add(run(n.args[0]), run(n.args[1]), 1.0);
      case Op::Sub: return add(run(n.args[0]), run(n.args[1]), -1.0);
      case Op::Mul: return mul(run(n.args[0]), run(n.args[1]));
      case Op::Div: {
        const Jet2 den = run(n.args[1]);
        if (den.value == 0.0) fail(e, "division by zero");
        return mul(run(n.args[0]), recip(den));
      }
      case Op::Neg: return neg(run(n.args[0]));
      case Op::PowInt: {
        const Jet2 base = run(n.args[0]);
        if (base.value == 0.0 && n.exponent < 0) fail(e, "negative power of zero");
        return int_pow(base, n.exponent);
      }
      case Op::PowReal: {
        const Jet2 u = run(n.args[0]);
        if (u.value <= 0.0) fail(e, "non-integer power of non-positive base");
        const double q = n.value;
        const double v = std::pow(u.value, q);
        return chain(u, v, q * v / u.value, q * (q - 1.0) * v / (u.value * u.value));
      }
      case Op::Pow: {
        const Jet2 base = run(n.args[0]);
        if (base.value <= 0.0) fail(e, "variable power of non-positive base");
        const Jet2 log_base = chain(base, std::log(base.value), 1.0 / base.value,
                                    -1.0 / (base.value * base.value));
        const Jet2 w = mul(run(n.args[1]), log_base);
        const double v = std::exp(w.value);
        return chain(w, v, v, v);
      }
      case Op::Exp: {
        const Jet2 u = run(n.args[0]);
        const double v = std::exp(u.value);
        return chain(u, v, v, v);
      }
      case Op::Ln: {
        const Jet2 u = run(n.args[0]);
        if (u.value <= 0.0) fail(e, "logarithm of non-positive argument");
        return chain(u, std::log(u.value), 1.0 / u.value, -1.0 / (u.value * u.value));
      }
      case Op::Sin: {
        const Jet2 u = run(n.args[0]);
        const double s = std::sin(u.value);
        return chain(u, s, std::cos(u.value), -s);
      }
      case Op::Cos: {
        const Jet2 u = run(n.args[0]);
        const double c = std::cos(u.value);
        return chain(u, c, -std::sin(u.value), -c);
      }
      case Op::Sqrt: {
        const Jet2 u = run(n.args[0]);
        if (u.value <= 0.0) fail(e, "square root of non-positive argument");
        const double s = std::sqrt(u.value);
        return chain(u, s, 0.5 / s, -0.25 / (s * u.value));
      }
      case Op::Integral: {
        const Jet2 u = run(n.args[0]);
        const Expr integrand(n.integrand);
        const Jet2 g = eval_jet2(integrand, CoordinatePoint{u.value});
        auto f = [&](double s) {
          const std::array<double, 1> q{s};
          return evaluate(integrand, q);
        };
        const double value =
            adaptive_simpson(f, n.value, u.value, QuadratureOptions{n.tolerance, 40});
        return chain(u, value, g.value, g.gradient(0));
      }
    }
    fail(e, "unsupported node");
  }
};

}  // namespace

Jet2 eval_jet2(const Expr& expr, const CoordinatePoint& p) { return JetEvaluator(p).run(expr); }

Jet2 finite_diff_jet2(const Expr& expr, const CoordinatePoint& p, double h) {
  if (!(h > 0.0)) throw PreconditionError("finite-difference step must be positive");
  const std::size_t n = p.dim();
  std::vector<double> x(p.coords().begin(), p.coords().end());
  std::vector<double> step(n);
  for (std::size_t i = 0; i < n; ++i) step[i] = h * std::max(1.0, std::abs(x[i]));

  // Fourth-order central weights on offsets -2..2, times 12. Integer weights
  // keep the sums exact for constant data.
  static constexpr std::array<double, 5> kFirst{1.0, -8.0, 0.0, 8.0, -1.0};
  static constexpr std::array<double, 5> kSecond{-1.0, 16.0, -30.0, 16.0, -1.0};

  auto f = [&](std::span<const double> q) { return evaluate(expr, q); };
  auto shifted = [&](std::size_t i, int si, std::size_t j, int sj) {
    std::vector<double> q = x;
    q[i] += si * step[i];
    q[j] += sj * step[j];
    return f(q);
  };

  Jet2 r = Jet2::constant(f(x), n);
  for (std::size_t i = 0; i < n; ++i) {
    double d1 = 0.0;
    double d2 = 0.0;
    for (int k = -2; k <= 2; ++k) {
      const double v = k == 0 ? r.value : shifted(i, k, i, 0);
      d1 += kFirst[static_cast<std::size_t>(k + 2)] * v;
      d2 += kSecond[static_cast<std::size_t>(k + 2)] * v;
    }
    const auto ii = static_cast<Eigen::Index>(i);
    r.gradient(ii) = d1 / (12.0 * step[i]);
    r.hessian(ii, ii) = d2 / (12.0 * step[i] * step[i]);
  }
  // Mixed partials: tensor product of the first-derivative stencil (16 points).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double mixed = 0.0;
      for (int a = -2; a <= 2; ++a) {
        for (int b = -2; b <= 2; ++b) {
          const double w = kFirst[static_cast<std::size_t>(a + 2)] * kFirst[static_cast<std::size_t>(b + 2)];
          if (w != 0.0) mixed += w * shifted(i, a, j, b);
        }
      }
      mixed /= 144.0 * step[i] * step[j];
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      r.hessian(ii, jj) = mixed;
      r.hessian(jj, ii) = mixed;
    }
  }
  return r;
}

}  // namespace sollab
