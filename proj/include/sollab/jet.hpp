#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sollab/expr.hpp"

namespace sollab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// A point of an n-dimensional chart. Construction rejects empty or
// non-finite coordinates.
class CoordinatePoint {
public:
  CoordinatePoint() = default;
  CoordinatePoint(std::initializer_list<double> coords);
  explicit CoordinatePoint(std::vector<double> coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  // Concatenation, used for product charts (base coordinates first).
  friend CoordinatePoint concat(const CoordinatePoint& a, const CoordinatePoint& b);

private:
  std::vector<double> coords_;
};

// Value, gradient and Hessian of a scalar field at a point. The Hessian is
// built upper-triangle-first and mirrored, so it is symmetric bit for bit.
struct Jet2 {
  double value = 0.0;
  Vector gradient;
  Matrix hessian;

  static Jet2 constant(double v, std::size_t n);
};

// Exact forward-mode second-order derivatives. Throws DomainError naming the
// offending node and the point.
Jet2 eval_jet2(const Expr& expr, const CoordinatePoint& p);

// Per-axis step used by the central-difference oracle: h * max(1, |x_i|).
inline constexpr double kDefaultFiniteDifferenceStep = 1e-3;

// Fourth-order central differences from plain evaluations only: 4-point
// gradient, 5-point diagonal and 16-point mixed second derivatives.
Jet2 finite_diff_jet2(const Expr& expr, const CoordinatePoint& p,
                      double h = kDefaultFiniteDifferenceStep);

}  // namespace sollab
