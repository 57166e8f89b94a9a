#include "sollab/families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sollab/curvature.hpp"
#include "sollab/errors.hpp"
#include "sollab/grid.hpp"
#include "sollab/parallel.hpp"
#include "sollab/quadrature.hpp"

namespace sollab {
namespace {

using Index = Eigen::Index;

constexpr std::size_t kT3 = 0, kX3 = 1, kY3 = 2;          // Walker3 (t, x, y)
constexpr std::size_t kX4 = 0, kY4 = 1, kZ4 = 2, kT4 = 3;  // Walker4 (x, y, z, t)

Index ix(std::size_t i) { return static_cast<Index>(i); }

double d1(const Jet2& j, std::size_t a) { return j.gradient(ix(a)); }
double d2(const Jet2& j, std::size_t a, std::size_t b) { return j.hessian(ix(a), ix(b)); }

void require_only(const Expr& e, std::span<const std::size_t> allowed, std::size_t dim,
                  const char* what) {
  for (std::size_t i = 0; i < dim; ++i) {
    if (std::find(allowed.begin(), allowed.end(), i) == allowed.end() && depends_on(e, i)) {
      throw PreconditionError(what);
    }
  }
  if (variable_extent(e) > dim) throw PreconditionError(what);
}

void require_riemannian(const MetricField& fiber) {
  if (fiber.signature().negative != 0) {
    throw PreconditionError("fiber metric must be Riemannian");
  }
}

std::vector<std::string> time_then(const std::vector<std::string>& fiber_coords) {
  if (std::find(fiber_coords.begin(), fiber_coords.end(), "t") != fiber_coords.end()) {
    throw PreconditionError("fiber coordinates must not use the name 't'");
  }
  std::vector<std::string> coords{"t"};
  coords.insert(coords.end(), fiber_coords.begin(), fiber_coords.end());
  return coords;
}

// Moves a field of the chart variable `index` onto the one-coordinate chart.
Expr to_univariate(const Expr& e, std::size_t index, std::size_t dim, const std::string& name) {
  std::vector<Expr> reps(dim, Expr::constant(0.0));
  reps[index] = Expr::variable(0, name);
  return substitute(e, reps);
}

}  // namespace

MetricField flat_fiber(std::vector<std::string> coords) {
  return MetricField::flat(coords, std::vector<double>(coords.size(), 1.0));
}

MetricField round_sphere(double radius, std::vector<std::string> coords) {
  if (!(radius > 0.0)) throw PreconditionError("sphere radius must be positive");
  if (coords.size() != 2) throw PreconditionError("round sphere needs two coordinates");
  const Expr r2 = Expr::constant(radius * radius);
  const Expr u = Expr::variable(0, coords[0]);
  return MetricField::diagonal(std::move(coords), {r2, r2 * pow(sin(u), 2)},
                               Signature::riemannian(2));
}

// ---------------------------------------------------------------------------

MetricField assemble_warped_metric(const WarpedProductSpec& spec,
                                   std::span<const CoordinatePoint> base_samples) {
  for (const auto& p : base_samples) {
    if (!(evaluate(spec.b, p.coords()) > 0.0)) {
      throw NonPositiveWarping("warping function is not positive at a base sample point");
    }
  }
  return warped_product_metric(spec.base, spec.fiber, spec.b);
}

MetricField assemble_grw_metric(const GRWSpec& spec) {
  require_riemannian(spec.fiber);
  if (!(spec.t_min < spec.t_max)) throw PreconditionError("GRW interval must satisfy t_min < t_max");
  if (variable_extent(spec.b) > 1) throw PreconditionError("GRW warping function depends on t only");
  for (double t : linspace(spec.t_min, spec.t_max, 65)) {
    const std::array<double, 1> q{t};
    if (!(evaluate(spec.b, q) > 0.0)) {
      throw NonPositiveWarping("GRW warping function is not positive at t = " + std::to_string(t));
    }
  }
  const MetricField base = MetricField::flat({"t"}, {-1.0});
  time_then(spec.fiber.coords());
  return warped_product_metric(base, spec.fiber, spec.b);
}

MetricField assemble_static_metric(const StaticSpec& spec,
                                   std::span<const CoordinatePoint> fiber_samples) {
  require_riemannian(spec.fiber);
  const std::size_t s = spec.fiber.dim();
  if (variable_extent(spec.f) > s) throw PreconditionError("lapse function must live on the fiber");
  for (const auto& p : fiber_samples) {
    if (!(evaluate(spec.f, p.coords()) > 0.0)) {
      throw NonPositiveWarping("static lapse function is not positive at a fiber sample point");
    }
  }
  std::vector<std::string> coords = time_then(spec.fiber.coords());
  const Expr f = shift_variables(spec.f, 1, coords);
  std::vector<std::vector<Expr>> c(s + 1, std::vector<Expr>(s + 1, Expr::constant(0.0)));
  c[0][0] = -(f * f);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      c[i + 1][j + 1] = shift_variables(spec.fiber.component(i, j), 1, coords);
    }
  }
  return MetricField(std::move(coords), c, Signature{1, 0} + spec.fiber.signature());
}

double grw_potential(const GRWSpec& spec, double alpha, double t0, double t, double tolerance) {
  for (double v : {t0, t}) {
    if (v < spec.t_min || v > spec.t_max) {
      throw PreconditionError("GRW potential evaluated outside the interval");
    }
  }
  auto inv_b = [&](double s) {
    const std::array<double, 1> q{s};
    const double b = evaluate(spec.b, q);
    if (!(b > 0.0)) throw NonPositiveWarping("GRW warping function is not positive inside the interval");
    return 1.0 / b;
  };
  return alpha * adaptive_simpson(inv_b, t0, t, QuadratureOptions{tolerance, 40});
}

Expr grw_potential_field(const GRWSpec& spec, double alpha, double t0, double tolerance) {
  if (variable_extent(spec.b) > 1) throw PreconditionError("GRW warping function depends on t only");
  const Expr t = Expr::variable(0, "t");
  return Expr::constant(alpha) * integral(1.0 / spec.b, t0, t, tolerance);
}

GRWSystemResidual grw_system_residual(const GRWSpec& spec, const Expr& phi, double lambda,
                                      double t, const CoordinatePoint& fiber_point) {
  const MetricField metric = assemble_grw_metric(spec);
  const CoordinatePoint q = concat(CoordinatePoint{t}, fiber_point);
  const double tau = curvature_at(metric, q).tau;
  const Jet2 ph = eval_jet2(phi, q);
  const Jet2 b = eval_jet2(spec.b, CoordinatePoint{t});
  const double dphi = ph.gradient(0);
  const double ddphi = ph.hessian(0, 0);
  const double db = b.gradient(0);
  return {ddphi + (tau - lambda), db * dphi - (tau - lambda) * b.value,
          b.value * ddphi + db * dphi};
}

StaticSystemResidual static_system_residual(const StaticSpec& spec, const Expr& phi,
                                            double lambda, const CoordinatePoint& fiber_point) {
  const Jet2 f = eval_jet2(spec.f, fiber_point);
  if (!(f.value > 0.0)) throw NonPositiveWarping("static lapse function is not positive");
  const MetricField metric = assemble_static_metric(spec);
  const double tau = curvature_at(metric, concat(CoordinatePoint{0.0}, fiber_point)).tau;

  const MetricAtPoint gf = metric_at(spec.fiber, fiber_point);
  const Christoffel cf = christoffel(gf);
  const Jet2 ph = eval_jet2(phi, fiber_point);
  const double grad_phi_f = gradient_inner(gf, ph.gradient, f.gradient);
  const auto s = static_cast<double>(spec.fiber.dim());

  StaticSystemResidual r;
  r.r1 = grad_phi_f - (tau - lambda) * f.value;
  r.r2 = covariant_hessian(cf, ph) - (tau - lambda) * gf.g;
  r.r3 = laplace_beltrami(gf, cf, ph) - s / f.value * grad_phi_f;
  return r;
}

// ---------------------------------------------------------------------------
// Walker3

MetricField walker3_metric(const Walker3Spec& spec) {
  require_only(spec.phi_metric, std::array<std::size_t, 3>{kT3, kX3, kY3}, 3,
               "Walker3 metric function must be a field over (t, x, y)");
  const Expr zero = Expr::constant(0.0);
  const Expr one = Expr::constant(1.0);
  return MetricField(walker3_coords(),
                     {{zero, zero, one}, {zero, one, zero}, {one, zero, spec.phi_metric}},
                     Signature::lorentzian(3));
}

ClosedForms walker3_closed_forms(const Walker3Spec& spec, const Expr& f, const CoordinatePoint& p,
                                 FormulaVariant variant) {
  const Jet2 F = eval_jet2(f, p);
  const Jet2 P = eval_jet2(spec.phi_metric, p);
  const double ft = d1(F, kT3), fx = d1(F, kX3), fy = d1(F, kY3);
  const double phi = P.value, pt = d1(P, kT3), px = d1(P, kX3), py = d1(P, kY3);

  Matrix h(3, 3);
  auto set = [&](std::size_t i, std::size_t j, double v) { h(ix(i), ix(j)) = h(ix(j), ix(i)) = v; };
  set(kT3, kT3, d2(F, kT3, kT3));
  set(kT3, kX3, d2(F, kT3, kX3));
  set(kT3, kY3, d2(F, kT3, kY3) - 0.5 * pt * ft);
  set(kX3, kX3, d2(F, kX3, kX3));
  set(kX3, kY3, d2(F, kX3, kY3) - 0.5 * px * ft);
  double yy = d2(F, kY3, kY3) - 0.5 * phi * pt * ft + 0.5 * pt * fy;
  if (variant == FormulaVariant::corrected) yy += -0.5 * py * ft + 0.5 * px * fx;
  set(kY3, kY3, yy);

  const double lap =
      -phi * d2(F, kT3, kT3) + 2.0 * d2(F, kT3, kY3) - pt * ft + d2(F, kX3, kX3);
  return {h, lap};
}

Vector walker3_pde_residual(const Walker3Spec& spec, const Expr& f, const CoordinatePoint& p,
                            FormulaVariant variant) {
  const Jet2 F = eval_jet2(f, p);
  const Jet2 P = eval_jet2(spec.phi_metric, p);
  const double ft = d1(F, kT3), fx = d1(F, kX3), fy = d1(F, kY3);
  const double phi = P.value, pt = d1(P, kT3), px = d1(P, kX3), py = d1(P, kY3);
  const double ftt = d2(F, kT3, kT3), ftx = d2(F, kT3, kX3), fty = d2(F, kT3, kY3);
  const double fxx = d2(F, kX3, kX3), fxy = d2(F, kX3, kY3), fyy = d2(F, kY3, kY3);

  Vector r(5);
  r(0) = ftt;
  r(1) = ftx;
  r(2) = fxy - 0.5 * px * ft;
  r(3) = fxx - fty + 0.5 * pt * ft;
  if (variant == FormulaVariant::paper_literal) {
    r(4) = fyy - fxx - 0.5 * phi * pt * ft + 0.5 * pt * fy;
  } else {
    // Hess_yy − φ Hess_xx with the complete yy entry.
    r(4) = fyy - phi * fxx - 0.5 * (phi * pt + py) * ft + 0.5 * px * fx + 0.5 * pt * fy;
  }
  return r;
}

Walker3Potential walker3_construct(const Walker3Construction& c, FormulaVariant variant,
                                   std::span<const double> y_samples) {
  require_only(c.eta, std::array<std::size_t, 1>{kY3}, 3, "eta must depend on y only");
  require_only(c.zeta, std::array<std::size_t, 2>{kX3, kY3}, 3, "zeta must depend on x and y only");
  const Expr deta = differentiate(c.eta, kY3);
  const Expr d2eta = differentiate(deta, kY3);

  static constexpr std::array<double, 5> kDefaultY{-1.0, -0.5, 0.0, 0.5, 1.0};
  if (y_samples.empty()) y_samples = kDefaultY;
  for (double y : y_samples) {
    const std::array<double, 3> q{0.0, 0.0, y};
    if (!(evaluate(deta, q) > 0.0)) {
      throw NonPositiveEtaPrime("eta' is not positive at y = " + std::to_string(y));
    }
  }

  const auto& names = walker3_coords();
  const Expr t = Expr::variable(kT3, names[kT3]);
  const Expr x = Expr::variable(kX3, names[kX3]);
  const Expr coefficient = variant == FormulaVariant::corrected ? d2eta / deta : ln(deta);
  return {Expr::constant(c.kappa) * x + c.eta, Expr::constant(-2.0) * t * coefficient + c.zeta};
}

// ---------------------------------------------------------------------------
// Walker4

MetricField walker4_metric(const Walker4Spec& spec) {
  require_only(spec.b, std::array<std::size_t, 1>{kT4}, 4, "Walker4 function b must depend on t only");
  const Expr zero = Expr::constant(0.0);
  const Expr one = Expr::constant(1.0);
  return MetricField(walker4_coords(),
                     {{zero, zero, one, zero},
                      {zero, zero, zero, one},
                      {one, zero, zero, zero},
                      {zero, one, zero, spec.b}},
                     Signature::neutral(4));
}

ClosedForms walker4_closed_forms(const Walker4Spec& spec, const Expr& f, const CoordinatePoint& p) {
  const Jet2 F = eval_jet2(f, p);
  const Jet2 B = eval_jet2(spec.b, p);
  Matrix h = F.hessian;
  h(ix(kT4), ix(kT4)) = d2(F, kT4, kT4) - 0.5 * d1(B, kT4) * d1(F, kY4);
  const double lap =
      2.0 * d2(F, kX4, kZ4) - B.value * d2(F, kY4, kY4) + 2.0 * d2(F, kY4, kT4);
  return {h, lap};
}

Vector walker4_pde_residual(const Walker4Spec& spec, const Expr& f, const CoordinatePoint& p) {
  const Jet2 F = eval_jet2(f, p);
  const Jet2 B = eval_jet2(spec.b, p);
  const double lap = walker4_closed_forms(spec, f, p).laplacian;
  Vector r(10);
  r(0) = d2(F, kX4, kX4);
  r(1) = d2(F, kX4, kY4);
  r(2) = d2(F, kY4, kY4);
  r(3) = d2(F, kY4, kZ4);
  r(4) = d2(F, kZ4, kZ4);
  r(5) = d2(F, kX4, kT4);
  r(6) = d2(F, kZ4, kT4);
  r(7) = d2(F, kX4, kZ4) - lap / 4.0;
  r(8) = d2(F, kY4, kT4) - lap / 4.0;
  r(9) = d2(F, kT4, kT4) - 0.5 * d1(B, kT4) * d1(F, kY4) - B.value * lap / 4.0;
  return r;
}

Walker4Potential walker4_construct(const Walker4Spec& spec, FormulaVariant variant,
                                   std::span<const double> t_samples) {
  require_only(spec.b, std::array<std::size_t, 1>{kT4}, 4, "Walker4 function b must depend on t only");
  const auto& names = walker4_coords();
  const Expr x = Expr::variable(kX4, names[kX4]);
  const Expr y = Expr::variable(kY4, names[kY4]);
  const Expr z = Expr::variable(kZ4, names[kZ4]);
  const Expr t = Expr::variable(kT4, names[kT4]);
  const Expr c0 = Expr::constant(spec.c0);

  // Integrating 2E' = b(c0 t + c1) + c0 ∫_{t0}^t b once more and swapping the
  // order of the double integral gives E(t) = ½(c0 t + c1) ∫_{t0}^t b.
  const Expr slope = c0 * t + Expr::constant(spec.c1);
  const Expr b_of_t = to_univariate(spec.b, kT4, 4, names[kT4]);
  const Expr E = 0.5 * slope * integral(b_of_t, spec.t0, t);

  const Expr y_coefficient =
      variant == FormulaVariant::corrected ? slope : c0 * z + Expr::constant(spec.c1);
  const Expr f = x * (c0 * z + Expr::constant(spec.c2)) + y * y_coefficient +
                 Expr::constant(spec.c3) * z + E;

  static constexpr std::array<double, 5> kDefaultT{-1.0, -0.5, 0.0, 0.5, 1.0};
  if (t_samples.empty()) t_samples = kDefaultT;
  sample_in_t(E, kT4, 4, t_samples);
  return {f, E};
}

std::vector<double> sample_in_t(const Expr& field_of_t, std::size_t t_index, std::size_t chart_dim,
                                std::span<const double> ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  std::vector<double> q(chart_dim, 0.0);
  for (double t : ts) {
    q[t_index] = t;
    out.push_back(evaluate(field_of_t, q));
  }
  return out;
}

LaplacianReport laplacian_report(const MetricField& metric, const Expr& f,
                                 std::span<const CoordinatePoint> points) {
  if (points.empty()) throw PreconditionError("laplacian_report needs at least one point");
  LaplacianReport r;
  r.values = parallel_map(points.size(),
                          [&](std::size_t i) { return laplace_beltrami(metric, f, points[i]); });
  r.mean = std::accumulate(r.values.begin(), r.values.end(), 0.0) /
           static_cast<double>(r.values.size());
  for (double v : r.values) r.max_dev = std::max(r.max_dev, std::abs(v - r.mean));
  return r;
}

}  // namespace sollab
