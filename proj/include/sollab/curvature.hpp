#pragma once

// Levi-Civita connection and curvature at a point.
//
// Conventions:
//   gamma(k, i, j)      = Γ^k_{ij} = ½ g^{kl}(∂_i g_{jl} + ∂_j g_{il} − ∂_l g_{ij})
//   riemann(l, k, i, j) = R^l_{kij} = ∂_i Γ^l_{jk} − ∂_j Γ^l_{ik} + Γ^l_{im}Γ^m_{jk} − Γ^l_{jm}Γ^m_{ik}
//   ricci(j, k)         = R^i_{jik}
//   tau                 = g^{jk} R_{jk}
// With these the unit 2-sphere has tau = +2.

#include "sollab/jet.hpp"
#include "sollab/metric.hpp"

namespace sollab {

struct Christoffel {
  Tensor3 gamma;  // upper index first
};

struct CurvatureAtPoint {
  Tensor4 riemann;
  Matrix ricci;
  double tau = 0.0;
};

Christoffel christoffel(const MetricAtPoint& m);

CurvatureAtPoint curvature_at(const MetricAtPoint& m);
CurvatureAtPoint curvature_at(const MetricField& m, const CoordinatePoint& p);

// Everything the soliton residuals need at one point, computed once.
struct PointGeometry {
  MetricAtPoint metric;
  Christoffel connection;
  CurvatureAtPoint curvature;

  static PointGeometry at(const MetricField& m, const CoordinatePoint& p);
};

struct GradientAndNorm {
  Vector raised;   // ∇f^i = g^{ij} ∂_j f
  double norm_sq;  // g^{ij} ∂_i f ∂_j f; negative for timelike gradients
};

// Hess(f)_ij = ∂_i∂_j f − Γ^k_ij ∂_k f, symmetric bit for bit.
Matrix covariant_hessian(const Christoffel& c, const Jet2& f);
Matrix covariant_hessian(const MetricField& m, const Expr& f, const CoordinatePoint& p);

GradientAndNorm gradient_and_norm(const MetricAtPoint& m, const Jet2& f);
GradientAndNorm gradient_and_norm(const MetricField& m, const Expr& f, const CoordinatePoint& p);

// g(∇a, ∇b) = g^{ij} ∂_i a ∂_j b
double gradient_inner(const MetricAtPoint& m, const Vector& da, const Vector& db);

// g^{ij} A_ij
double metric_trace(const MetricAtPoint& m, const Matrix& a);

// Δf = g^{ij} Hess(f)_ij, through the same code path as covariant_hessian.
double laplace_beltrami(const MetricAtPoint& m, const Christoffel& c, const Jet2& f);
double laplace_beltrami(const MetricField& m, const Expr& f, const CoordinatePoint& p);

}  // namespace sollab
