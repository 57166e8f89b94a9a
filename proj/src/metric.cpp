#include "sollab/metric.hpp"

#include <cmath>
#include <sstream>

#include "sollab/errors.hpp"

namespace sollab {

Signature Signature::parse(std::string_view text) {
  Signature s;
  for (char c : text) {
    if (c == '-') {
      ++s.negative;
    } else if (c == '+') {
      ++s.positive;
    } else if (c != '(' && c != ')' && c != ',' && c != ' ') {
      throw PreconditionError("signature may only contain '+', '-', ',', ' ' and parentheses");
    }
  }
  if (s.dim() == 0) throw PreconditionError("empty signature");
  return s;
}

std::string Signature::to_string() const {
  std::string out = "(";
  for (int i = 0; i < dim(); ++i) {
    if (i) out += ",";
    out += i < negative ? "-" : "+";
  }
  return out + ")";
}

Signature operator+(const Signature& a, const Signature& b) {
  return {a.negative + b.negative, a.positive + b.positive};
}

namespace {

std::size_t packed_index(std::size_t i, std::size_t j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * n - i * (i + 1) / 2 + j;
}

}  // namespace

MetricField::MetricField(std::vector<std::string> coords,
                         const std::vector<std::vector<Expr>>& components, Signature expected)
    : coords_(std::move(coords)), signature_(expected) {
  const std::size_t n = coords_.size();
  if (n == 0 || n > kMaxChartDim) {
    throw PreconditionError("chart dimension must be between 1 and " +
                            std::to_string(kMaxChartDim));
  }
  if (static_cast<std::size_t>(signature_.dim()) != n) {
    throw PreconditionError("signature " + signature_.to_string() + " does not match dimension " +
                            std::to_string(n));
  }
  if (components.size() != n) throw PreconditionError("metric must have one row per coordinate");
  for (const auto& row : components) {
    if (row.size() != n) throw PreconditionError("metric rows must have one entry per coordinate");
  }
  packed_.resize(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      if (!structurally_equal(components[i][j], components[j][i])) {
        throw PreconditionError("metric components (" + std::to_string(i) + "," +
                                std::to_string(j) + ") and (" + std::to_string(j) + "," +
                                std::to_string(i) + ") differ");
      }
      if (variable_extent(components[i][j]) > n) {
        throw PreconditionError("metric component references a variable outside the chart");
      }
      packed_[packed_index(i, j, n)] = components[i][j];
    }
  }
}

MetricField MetricField::from_strings(std::vector<std::string> coords,
                                      const std::vector<std::vector<std::string>>& components,
                                      Signature expected) {
  std::vector<std::vector<Expr>> parsed;
  parsed.reserve(components.size());
  for (const auto& row : components) {
    std::vector<Expr> out;
    out.reserve(row.size());
    for (const auto& s : row) out.push_back(parse_expression(s, coords));
    parsed.push_back(std::move(out));
  }
  return MetricField(std::move(coords), parsed, expected);
}

MetricField MetricField::diagonal(std::vector<std::string> coords, const std::vector<Expr>& diag,
                                  Signature expected) {
  const std::size_t n = diag.size();
  std::vector<std::vector<Expr>> c(n, std::vector<Expr>(n, Expr::constant(0.0)));
  for (std::size_t i = 0; i < n; ++i) c[i][i] = diag[i];
  return MetricField(std::move(coords), c, expected);
}

MetricField MetricField::flat(std::vector<std::string> coords, const std::vector<double>& diag) {
  std::vector<Expr> d;
  Signature s;
  for (double v : diag) {
    d.push_back(Expr::constant(v));
    (v < 0.0 ? s.negative : s.positive) += 1;
  }
  return diagonal(std::move(coords), d, s);
}

const Expr& MetricField::component(std::size_t i, std::size_t j) const {
  return packed_[packed_index(i, j, dim())];
}

MetricAtPoint metric_at(const MetricField& m, const CoordinatePoint& p) {
  const std::size_t n = m.dim();
  if (p.dim() != n) {
    throw PreconditionError("point has " + std::to_string(p.dim()) + " coordinates, chart has " +
                            std::to_string(n));
  }
  const auto N = static_cast<Eigen::Index>(n);
  MetricAtPoint out{Matrix(N, N), Matrix(N, N), Tensor3(n), Tensor4(n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Jet2 jet = eval_jet2(m.component(i, j), p);
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      out.g(ii, jj) = jet.value;
      out.g(jj, ii) = jet.value;
      for (std::size_t k = 0; k < n; ++k) {
        const double d = jet.gradient(static_cast<Eigen::Index>(k));
        out.dg(k, i, j) = d;
        out.dg(k, j, i) = d;
        for (std::size_t l = 0; l < n; ++l) {
          const double dd = jet.hessian(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
          out.d2g(k, l, i, j) = dd;
          out.d2g(k, l, j, i) = dd;
        }
      }
    }
  }

  const Eigen::PartialPivLU<Matrix> lu(out.g);
  const double det = lu.determinant();
  if (!(std::abs(det) >= kSingularDeterminant)) {
    std::ostringstream msg;
    msg << "metric is singular (det = " << det << ") at point (";
    for (std::size_t i = 0; i < n; ++i) msg << (i ? ", " : "") << p[i];
    msg << ")";
    throw SingularMetric(msg.str());
  }
  Matrix inv = lu.inverse();
  // One step of iterative refinement, then exact symmetrisation.
  inv += inv * (Matrix::Identity(N, N) - out.g * inv);
  out.g_inv = 0.5 * (inv + inv.transpose());

  const Eigen::SelfAdjointEigenSolver<Matrix> eig(out.g, Eigen::EigenvaluesOnly);
  Signature found;
  for (Eigen::Index i = 0; i < N; ++i) {
    (eig.eigenvalues()(i) < 0.0 ? found.negative : found.positive) += 1;
  }
  if (!(found == m.signature())) {
    std::ostringstream msg;
    msg << "metric signature " << found.to_string() << " differs from expected "
        << m.signature().to_string() << " at point (";
    for (std::size_t i = 0; i < n; ++i) msg << (i ? ", " : "") << p[i];
    msg << ")";
    throw SignatureMismatch(msg.str());
  }
  return out;
}

}  // namespace sollab
