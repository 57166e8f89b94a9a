#pragma once

// Residuals of the gradient Yamabe equation Hess(φ) = (τ−λ)g and of its
// generalized quasi form Hess(φ) = (τ−λ)g + μ dφ⊗dφ, together with λ
// inference, classification and the warped-product condition checks.

#include <span>
#include <string_view>
#include <vector>

#include "sollab/curvature.hpp"
#include "sollab/expr.hpp"
#include "sollab/metric.hpp"

namespace sollab {

struct SolitonData {
  Expr phi;
  double lambda = 0.0;
  double mu = 0.0;  // 0: pure gradient Yamabe; otherwise m = 1/mu
};

// Hess(φ) − (τ−λ)g. Requires s.mu == 0.
Matrix gys_residual(const MetricField& m, const SolitonData& s, const CoordinatePoint& p);

// Hess(φ) − (τ−λ)g − μ dφ⊗dφ. With mu == 0 this is gys_residual bit for bit.
Matrix gqy_residual(const MetricField& m, const SolitonData& s, const CoordinatePoint& p);
Matrix gqy_residual(const PointGeometry& geometry, const Jet2& phi, double lambda, double mu);

struct ThetaCheck {
  Matrix theta_residual;     // Hess(θ) + (θ/m)(τ−λ)g
  Matrix identity_residual;  // Hess(φ) − (1/m)dφ⊗dφ + (m/θ)Hess(θ)
};

// θ = exp(−φ/m) is built symbolically, so its jets are exact. Requires mu != 0.
ThetaCheck theta_check(const MetricField& m, const SolitonData& s, const CoordinatePoint& p);

struct LambdaEstimate {
  double lambda_hat = 0.0;
  double spread = 0.0;              // max |λ(p) − lambda_hat|
  std::vector<double> pointwise;    // λ(p) = τ − (Δφ − μ|∇φ|²)/n, in point order
};

LambdaEstimate infer_lambda(const MetricField& m, const Expr& phi, double mu,
                            std::span<const CoordinatePoint> points);

// Default threshold below which an inferred λ counts as constant.
inline constexpr double kConstancyThreshold = 1e-8;

enum class SolitonClass { shrinking, steady, expanding };

SolitonClass classify(double lambda_hat, double tol);
std::string_view to_string(SolitonClass c);

struct ResidualReport {
  std::vector<CoordinatePoint> points;
  std::vector<Matrix> residual_grids;
  std::vector<double> pointwise_max;
  double max_abs = 0.0;
  double mean_abs = 0.0;  // mean of the per-point max norms
  std::size_t worst = 0;  // index of the point attaining max_abs
  bool pass = false;      // max_abs <= tolerance
};

// gqy_residual over every point (gys when s.mu == 0).
ResidualReport residual_report(const MetricField& m, const SolitonData& s,
                               std::span<const CoordinatePoint> points, double tolerance);

// Block metric g_B ⊕ b² g_F over the chart (base coords, fiber coords).
MetricField warped_product_metric(const MetricField& base, const MetricField& fiber,
                                  const Expr& b);

struct WarpedConditions {
  double c1 = 0.0;  // max |∂φ/∂(fiber coords)|
  double c2 = 0.0;  // max |g_B(∇θ,∇b) − (λ−τ)bθ/m|
  double c3 = 0.0;  // max-norm of Hess^B(θ) − (θ/m)(λ−τ)g_B
  double c4 = 0.0;  // spread of τ_F over the fiber points
  // Condition (2) of the warped-product characterisation, reported pointwise:
  // smallest |g_B(∇θ,∇b)| seen. Zero means φ and b were orthogonal somewhere.
  double min_gradient_coupling = 0.0;
};

// φ is a field over the product chart; b over the base chart. Requires
// s.mu != 0 and b > 0 at every base point (NonPositiveWarping otherwise).
WarpedConditions warped_conditions_check(const MetricField& base, const MetricField& fiber,
                                         const Expr& b, const SolitonData& s,
                                         std::span<const CoordinatePoint> base_points,
                                         std::span<const CoordinatePoint> fiber_points);

}  // namespace sollab
