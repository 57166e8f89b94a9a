#pragma once

// Metric families with explicit soliton structures: warped products,
// generalized Robertson-Walker and standard static spacetimes, and the 3- and
// 4-dimensional Walker metrics.
//
// Coordinate order is fixed per family:
//   Walker3: (t, x, y)      g = 2 dt dy + dx² + φ(t,x,y) dy²
//   Walker4: (x, y, z, t)   g = 2 dx dz + 2 dy dt + b(t) dt²
//   GRW:     (t, fiber...)  g = −dt² ⊕ b(t)² g_F
//   static:  (t, fiber...)  g = −f² dt² ⊕ g_F

#include <array>
#include <span>
#include <string>
#include <vector>

#include "sollab/expr.hpp"
#include "sollab/metric.hpp"
#include "sollab/soliton.hpp"

namespace sollab {

// Formulas as derived from the metric, or exactly as printed in the source
// derivation. The printed forms are kept only to show where they fail.
enum class FormulaVariant { corrected, paper_literal };

inline const std::vector<std::string>& walker3_coords() {
  static const std::vector<std::string> c{"t", "x", "y"};
  return c;
}
inline const std::vector<std::string>& walker4_coords() {
  static const std::vector<std::string> c{"x", "y", "z", "t"};
  return c;
}

// Fibers with constant scalar curvature.
MetricField flat_fiber(std::vector<std::string> coords);
MetricField round_sphere(double radius, std::vector<std::string> coords = {"u", "v"});

// ---------------------------------------------------------------------------
// Warped products, GRW and static spacetimes

struct WarpedProductSpec {
  MetricField base;
  MetricField fiber;
  Expr b;  // over the base chart, positive
};

struct GRWSpec {
  Expr b;  // over the one-coordinate chart (t)
  MetricField fiber;
  double t_min = 1.0;
  double t_max = 2.0;
};

struct StaticSpec {
  Expr f;  // over the fiber chart, positive
  MetricField fiber;
};

// Throws NonPositiveWarping if the warping/lapse function is not positive at
// the sample points (GRW: 65 points spanning the interval).
MetricField assemble_warped_metric(const WarpedProductSpec& spec,
                                   std::span<const CoordinatePoint> base_samples = {});
MetricField assemble_grw_metric(const GRWSpec& spec);
MetricField assemble_static_metric(const StaticSpec& spec,
                                   std::span<const CoordinatePoint> fiber_samples = {});

// α ∫_{t0}^{t} 1/b, adaptive Simpson to the given absolute tolerance.
double grw_potential(const GRWSpec& spec, double alpha, double t0, double t,
                     double tolerance = 1e-10);
// The same potential as a field over the GRW chart; derivatives are exact.
Expr grw_potential_field(const GRWSpec& spec, double alpha, double t0, double tolerance = 1e-10);

struct GRWSystemResidual {
  double r1 = 0.0;  // φ'' + (τ−λ)
  double r2 = 0.0;  // b'φ' − (τ−λ)b
  double r3 = 0.0;  // bφ'' + b'φ'
};

// φ is a field over the GRW chart depending on t only.
GRWSystemResidual grw_system_residual(const GRWSpec& spec, const Expr& phi, double lambda,
                                      double t, const CoordinatePoint& fiber_point);

struct StaticSystemResidual {
  double r1 = 0.0;  // g_F(∇φ,∇f) − (τ−λ)f
  Matrix r2;        // Hess_F(φ) − (τ−λ)g_F
  double r3 = 0.0;  // Δ_F φ − (s/f) g_F(∇φ,∇f)
};

// φ is a field over the fiber chart.
StaticSystemResidual static_system_residual(const StaticSpec& spec, const Expr& phi,
                                            double lambda, const CoordinatePoint& fiber_point);

// ---------------------------------------------------------------------------
// Walker manifolds

struct Walker3Spec {
  Expr phi_metric;  // over (t, x, y)
};

struct Walker3Construction {
  double kappa = 0.0;
  Expr eta;   // over (t, x, y), depending on y only, with η' > 0
  Expr zeta;  // over (t, x, y), depending on x and y only
};

struct ClosedForms {
  Matrix hessian;
  double laplacian = 0.0;
};

MetricField walker3_metric(const Walker3Spec& spec);

// Hessian table and Laplacian evaluated directly from jets of f and φ.
ClosedForms walker3_closed_forms(const Walker3Spec& spec, const Expr& f, const CoordinatePoint& p,
                                 FormulaVariant variant = FormulaVariant::corrected);

// (f_tt, f_tx, f_xy − ½φ_x f_t, f_xx − f_ty + ½φ_t f_t, yy-equation)
Vector walker3_pde_residual(const Walker3Spec& spec, const Expr& f, const CoordinatePoint& p,
                            FormulaVariant variant = FormulaVariant::corrected);

struct Walker3Potential {
  Expr f;
  Expr phi_metric;
};

// f = κx + η(y); φ = −2t η''/η' + ζ (corrected) or −2t ln η' + ζ (literal).
// Throws NonPositiveEtaPrime when η' <= 0 at one of the sampled y values.
Walker3Potential walker3_construct(const Walker3Construction& c,
                                   FormulaVariant variant = FormulaVariant::corrected,
                                   std::span<const double> y_samples = {});

struct Walker4Spec {
  Expr b;  // over (x, y, z, t), depending on t only
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  double t0 = 0.0;
};

MetricField walker4_metric(const Walker4Spec& spec);

ClosedForms walker4_closed_forms(const Walker4Spec& spec, const Expr& f, const CoordinatePoint& p);

// (f_xx, f_xy, f_yy, f_yz, f_zz, f_xt, f_zt, f_xz − Δ/4, f_yt − Δ/4,
//  f_tt − ½b_t f_y − bΔ/4), Δ from the closed form.
Vector walker4_pde_residual(const Walker4Spec& spec, const Expr& f, const CoordinatePoint& p);

struct Walker4Potential {
  Expr f;
  Expr E;  // over (x, y, z, t), depending on t only
};

// f = x(c0 z + c2) + y(c0 t + c1) + c3 z + E(t)  (literal: y(c0 z + c1)),
// with 2E' = b(c0 t + c1) + c0 ∫_{t0}^t b, E(t0) = 0. The quadrature is
// exercised eagerly at t_samples so failures surface here.
Walker4Potential walker4_construct(const Walker4Spec& spec,
                                   FormulaVariant variant = FormulaVariant::corrected,
                                   std::span<const double> t_samples = {});

std::vector<double> sample_in_t(const Expr& field_of_t, std::size_t t_index, std::size_t chart_dim,
                                std::span<const double> ts);

// ---------------------------------------------------------------------------

struct LaplacianReport {
  std::vector<double> values;
  double mean = 0.0;
  double max_dev = 0.0;  // max |Δf − mean|
};

LaplacianReport laplacian_report(const MetricField& metric, const Expr& f,
                                 std::span<const CoordinatePoint> points);

}  // namespace sollab
