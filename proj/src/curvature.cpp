#include "sollab/curvature.hpp"

#include "sollab/errors.hpp"

namespace sollab {
namespace {

using Index = Eigen::Index;

Index ix(std::size_t i) { return static_cast<Index>(i); }

// Γ_{l,ij} = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij), stored as low(l, i, j).
Tensor3 lowered_christoffel(const MetricAtPoint& m) {
  const std::size_t n = m.dim();
  Tensor3 low(n);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double v = 0.5 * (m.dg(i, j, l) + m.dg(j, i, l) - m.dg(l, i, j));
        low(l, i, j) = v;
        low(l, j, i) = v;
      }
    }
  }
  return low;
}

}  // namespace

Christoffel christoffel(const MetricAtPoint& m) {
  const std::size_t n = m.dim();
  const Tensor3 low = lowered_christoffel(m);
  Christoffel c{Tensor3(n)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        double v = 0.0;
        for (std::size_t l = 0; l < n; ++l) v += m.g_inv(ix(k), ix(l)) * low(l, i, j);
        c.gamma(k, i, j) = v;
        c.gamma(k, j, i) = v;
      }
    }
  }
  return c;
}

CurvatureAtPoint curvature_at(const MetricAtPoint& m) {
  const std::size_t n = m.dim();
  const Tensor3 low = lowered_christoffel(m);
  const Christoffel c = christoffel(m);
  const Tensor3& G = c.gamma;

  // ∂_a g^{kl} = −g^{kb} ∂_a g_bc g^{cl}
  Tensor3 dinv(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t l = k; l < n; ++l) {
        double v = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
          for (std::size_t e = 0; e < n; ++e) {
            v -= m.g_inv(ix(k), ix(b)) * m.dg(a, b, e) * m.g_inv(ix(e), ix(l));
          }
        }
        dinv(a, k, l) = v;
        dinv(a, l, k) = v;
      }
    }
  }

  // dG(a, k, i, j) = ∂_a Γ^k_ij
  Tensor4 dG(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        std::vector<double> dlow(n);
        for (std::size_t l = 0; l < n; ++l) {
          dlow[l] = 0.5 * (m.d2g(a, i, j, l) + m.d2g(a, j, i, l) - m.d2g(a, l, i, j));
        }
        for (std::size_t k = 0; k < n; ++k) {
          double v = 0.0;
          for (std::size_t l = 0; l < n; ++l) {
            v += dinv(a, k, l) * low(l, i, j) + m.g_inv(ix(k), ix(l)) * dlow[l];
          }
          dG(a, k, i, j) = v;
          dG(a, k, j, i) = v;
        }
      }
    }
  }

  CurvatureAtPoint out{Tensor4(n), Matrix::Zero(ix(n), ix(n)), 0.0};
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          double v = dG(i, l, j, k) - dG(j, l, i, k);
          for (std::size_t q = 0; q < n; ++q) {
            v += G(l, i, q) * G(q, j, k) - G(l, j, q) * G(q, i, k);
          }
          out.riemann(l, k, i, j) = v;
          out.riemann(l, k, j, i) = -v;
        }
      }
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) v += out.riemann(i, j, i, k);
      out.ricci(ix(j), ix(k)) = v;
    }
  }
  out.tau = metric_trace(m, out.ricci);
  return out;
}

CurvatureAtPoint curvature_at(const MetricField& m, const CoordinatePoint& p) {
  return curvature_at(metric_at(m, p));
}

PointGeometry PointGeometry::at(const MetricField& m, const CoordinatePoint& p) {
  MetricAtPoint metric = metric_at(m, p);
  Christoffel connection = christoffel(metric);
  CurvatureAtPoint curvature = curvature_at(metric);
  return {std::move(metric), std::move(connection), std::move(curvature)};
}

Matrix covariant_hessian(const Christoffel& c, const Jet2& f) {
  const std::size_t n = c.gamma.dim();
  if (static_cast<std::size_t>(f.gradient.size()) != n) {
    throw PreconditionError("field jet and connection have different dimensions");
  }
  Matrix h(ix(n), ix(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double v = f.hessian(ix(i), ix(j));
      for (std::size_t k = 0; k < n; ++k) v -= c.gamma(k, i, j) * f.gradient(ix(k));
      h(ix(i), ix(j)) = v;
      h(ix(j), ix(i)) = v;
    }
  }
  return h;
}

Matrix covariant_hessian(const MetricField& m, const Expr& f, const CoordinatePoint& p) {
  return covariant_hessian(christoffel(metric_at(m, p)), eval_jet2(f, p));
}

double gradient_inner(const MetricAtPoint& m, const Vector& da, const Vector& db) {
  return da.dot(m.g_inv * db);
}

GradientAndNorm gradient_and_norm(const MetricAtPoint& m, const Jet2& f) {
  Vector raised = m.g_inv * f.gradient;
  const double norm = f.gradient.dot(raised);
  return {std::move(raised), norm};
}

GradientAndNorm gradient_and_norm(const MetricField& m, const Expr& f, const CoordinatePoint& p) {
  return gradient_and_norm(metric_at(m, p), eval_jet2(f, p));
}

double metric_trace(const MetricAtPoint& m, const Matrix& a) {
  return (m.g_inv.array() * a.array()).sum();
}

double laplace_beltrami(const MetricAtPoint& m, const Christoffel& c, const Jet2& f) {
  return metric_trace(m, covariant_hessian(c, f));
}

double laplace_beltrami(const MetricField& m, const Expr& f, const CoordinatePoint& p) {
  const MetricAtPoint metric = metric_at(m, p);
  return laplace_beltrami(metric, christoffel(metric), eval_jet2(f, p));
}

}  // namespace sollab
