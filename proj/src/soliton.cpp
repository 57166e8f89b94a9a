#include "sollab/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sollab/errors.hpp"
#include "sollab/parallel.hpp"

namespace sollab {
namespace {

using Index = Eigen::Index;

void require_same_chart(const MetricField& m, const CoordinatePoint& p) {
  if (p.dim() != m.dim()) {
    throw PreconditionError("point has " + std::to_string(p.dim()) + " coordinates, chart has " +
                            std::to_string(m.dim()));
  }
}

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Expr theta_of(const Expr& phi, double m) { return exp(-(phi / Expr::constant(m))); }

}  // namespace

Matrix gqy_residual(const PointGeometry& geometry, const Jet2& phi, double lambda, double mu) {
  const Matrix hess = covariant_hessian(geometry.connection, phi);
  const double shift = geometry.curvature.tau - lambda;
  const Index n = hess.rows();
  Matrix r(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      double v = hess(i, j) - shift * geometry.metric.g(i, j);
      if (mu != 0.0) v -= mu * phi.gradient(i) * phi.gradient(j);
      r(i, j) = v;
      r(j, i) = v;
    }
  }
  return r;
}

Matrix gqy_residual(const MetricField& m, const SolitonData& s, const CoordinatePoint& p) {
  require_same_chart(m, p);
  return gqy_residual(PointGeometry::at(m, p), eval_jet2(s.phi, p), s.lambda, s.mu);
}

Matrix gys_residual(const MetricField& m, const SolitonData& s, const CoordinatePoint& p) {
  if (s.mu != 0.0) throw PreconditionError("gys_residual requires mu = 0");
  return gqy_residual(m, s, p);
}

ThetaCheck theta_check(const MetricField& m, const SolitonData& s, const CoordinatePoint& p) {
  if (s.mu == 0.0) throw PreconditionError("theta_check requires mu != 0");
  require_same_chart(m, p);
  const double mm = 1.0 / s.mu;
  const PointGeometry geo = PointGeometry::at(m, p);
  const Jet2 phi = eval_jet2(s.phi, p);
  const Jet2 theta = eval_jet2(theta_of(s.phi, mm), p);
  const Matrix hess_phi = covariant_hessian(geo.connection, phi);
  const Matrix hess_theta = covariant_hessian(geo.connection, theta);
  const double shift = geo.curvature.tau - s.lambda;

  const Index n = hess_phi.rows();
  ThetaCheck out{Matrix(n, n), Matrix(n, n)};
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double tr = hess_theta(i, j) + theta.value / mm * shift * geo.metric.g(i, j);
      const double id = hess_phi(i, j) - phi.gradient(i) * phi.gradient(j) / mm +
                        mm / theta.value * hess_theta(i, j);
      out.theta_residual(i, j) = out.theta_residual(j, i) = tr;
      out.identity_residual(i, j) = out.identity_residual(j, i) = id;
    }
  }
  return out;
}

LambdaEstimate infer_lambda(const MetricField& m, const Expr& phi, double mu,
                            std::span<const CoordinatePoint> points) {
  if (points.empty()) throw PreconditionError("infer_lambda needs at least one point");
  const auto n = static_cast<double>(m.dim());
  LambdaEstimate out;
  out.pointwise = parallel_map(points.size(), [&](std::size_t i) {
    const CoordinatePoint& p = points[i];
    require_same_chart(m, p);
    const PointGeometry geo = PointGeometry::at(m, p);
    const Jet2 jet = eval_jet2(phi, p);
    const double lap = laplace_beltrami(geo.metric, geo.connection, jet);
    const double norm = gradient_and_norm(geo.metric, jet).norm_sq;
    return geo.curvature.tau - (lap - mu * norm) / n;
  });
  out.lambda_hat = std::accumulate(out.pointwise.begin(), out.pointwise.end(), 0.0) /
                   static_cast<double>(out.pointwise.size());
  for (double l : out.pointwise) out.spread = std::max(out.spread, std::abs(l - out.lambda_hat));
  return out;
}

SolitonClass classify(double lambda_hat, double tol) {
  if (lambda_hat > tol) return SolitonClass::shrinking;
  if (lambda_hat < -tol) return SolitonClass::expanding;
  return SolitonClass::steady;
}

std::string_view to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::shrinking: return "shrinking";
    case SolitonClass::steady: return "steady";
    case SolitonClass::expanding: return "expanding";
  }
  return "steady";
}

ResidualReport residual_report(const MetricField& m, const SolitonData& s,
                               std::span<const CoordinatePoint> points, double tolerance) {
  ResidualReport r;
  r.points.assign(points.begin(), points.end());
  r.residual_grids =
      parallel_map(points.size(), [&](std::size_t i) { return gqy_residual(m, s, points[i]); });
  r.pointwise_max.reserve(points.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < r.residual_grids.size(); ++i) {
    const double v = max_abs(r.residual_grids[i]);
    r.pointwise_max.push_back(v);
    sum += v;
    if (v > r.max_abs || std::isnan(v)) {
      r.max_abs = v;
      r.worst = i;
    }
  }
  r.mean_abs = points.empty() ? 0.0 : sum / static_cast<double>(points.size());
  r.pass = r.max_abs <= tolerance;
  return r;
}

MetricField warped_product_metric(const MetricField& base, const MetricField& fiber,
                                  const Expr& b) {
  const std::size_t r = base.dim();
  const std::size_t s = fiber.dim();
  std::vector<std::string> coords = base.coords();
  for (const auto& name : fiber.coords()) {
    if (std::find(coords.begin(), coords.end(), name) != coords.end()) {
      throw PreconditionError("base and fiber share the coordinate name '" + name + "'");
    }
    coords.push_back(name);
  }
  if (variable_extent(b) > r) {
    throw PreconditionError("warping function must depend on base coordinates only");
  }
  const Expr b_sq = b * b;
  std::vector<std::vector<Expr>> c(r + s, std::vector<Expr>(r + s, Expr::constant(0.0)));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) c[i][j] = shift_variables(base.component(i, j), 0, coords);
  }
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      c[r + i][r + j] = b_sq * shift_variables(fiber.component(i, j), r, coords);
      c[r + j][r + i] = c[r + i][r + j];
    }
  }
  return MetricField(std::move(coords), c, base.signature() + fiber.signature());
}

WarpedConditions warped_conditions_check(const MetricField& base, const MetricField& fiber,
                                         const Expr& b, const SolitonData& s,
                                         std::span<const CoordinatePoint> base_points,
                                         std::span<const CoordinatePoint> fiber_points) {
  if (s.mu == 0.0) throw PreconditionError("warped_conditions_check requires mu != 0");
  if (base_points.empty() || fiber_points.empty()) {
    throw PreconditionError("warped_conditions_check needs base and fiber points");
  }
  const double mm = 1.0 / s.mu;
  const std::size_t r = base.dim();
  const MetricField product = warped_product_metric(base, fiber, b);
  const Expr theta = theta_of(s.phi, mm);

  struct BaseData {
    MetricAtPoint metric;
    Christoffel connection;
    Jet2 b;
  };
  std::vector<BaseData> base_data;
  base_data.reserve(base_points.size());
  for (const auto& bp : base_points) {
    Jet2 bj = eval_jet2(b, bp);
    if (!(bj.value > 0.0)) {
      throw NonPositiveWarping("warping function is not positive at a base sample point");
    }
    MetricAtPoint mb = metric_at(base, bp);
    Christoffel cb = christoffel(mb);
    base_data.push_back({std::move(mb), std::move(cb), std::move(bj)});
  }

  struct PairResult {
    double c1, c2, c3, coupling;
  };
  const std::size_t nf = fiber_points.size();
  const auto pairs = parallel_map(base_points.size() * nf, [&](std::size_t k) {
    const BaseData& bd = base_data[k / nf];
    const CoordinatePoint q = concat(base_points[k / nf], fiber_points[k % nf]);
    const Jet2 phi = eval_jet2(s.phi, q);
    const Jet2 th = eval_jet2(theta, q);
    const double tau = curvature_at(product, q).tau;

    PairResult out{0.0, 0.0, 0.0, 0.0};
    for (Index i = static_cast<Index>(r); i < phi.gradient.size(); ++i) {
      out.c1 = std::max(out.c1, std::abs(phi.gradient(i)));
    }
    const auto R = static_cast<Index>(r);
    const Jet2 th_base{th.value, th.gradient.head(R), th.hessian.topLeftCorner(R, R)};
    const double coupling = gradient_inner(bd.metric, th_base.gradient, bd.b.gradient);
    out.coupling = std::abs(coupling);
    out.c2 = std::abs(coupling - (s.lambda - tau) * bd.b.value * th.value / mm);
    const Matrix hess_b = covariant_hessian(bd.connection, th_base);
    out.c3 = (hess_b - th.value / mm * (s.lambda - tau) * bd.metric.g).cwiseAbs().maxCoeff();
    return out;
  });

  WarpedConditions w;
  w.min_gradient_coupling = std::numeric_limits<double>::infinity();
  for (const auto& pr : pairs) {
    w.c1 = std::max(w.c1, pr.c1);
    w.c2 = std::max(w.c2, pr.c2);
    w.c3 = std::max(w.c3, pr.c3);
    w.min_gradient_coupling = std::min(w.min_gradient_coupling, pr.coupling);
  }

  std::vector<double> tau_f;
  tau_f.reserve(nf);
  for (const auto& fp : fiber_points) tau_f.push_back(curvature_at(fiber, fp).tau);
  const double mean =
      std::accumulate(tau_f.begin(), tau_f.end(), 0.0) / static_cast<double>(tau_f.size());
  for (double t : tau_f) w.c4 = std::max(w.c4, std::abs(t - mean));
  return w;
}

}  // namespace sollab
