#include <cmath>

#include "doctest.h"
#include "sollab/errors.hpp"
#include "sollab/families.hpp"
#include "sollab/grid.hpp"
#include "sollab/soliton.hpp"
#include "support/oracles.hpp"
#include "support/zoo.hpp"

using namespace sollab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

std::vector<CoordinatePoint> grw_points() {
  const std::array<Axis, 4> axes{Axis{1.0, 2.0, 5}, Axis{-1, 1, 3}, Axis{-1, 1, 3}, Axis{-1, 1, 3}};
  return make_grid(axes);
}

MetricField grw_t_metric() {
  return assemble_grw_metric({Expr::variable(0, "t"), flat_fiber({"x1", "x2", "x3"}), 1.0, 2.0});
}

}  // namespace

TEST_CASE("flat metric with constant potential") {
  const MetricField m = MetricField::flat({"x", "y"}, {1, 1});
  const SolitonData s{Expr::constant(3.0), 0.0, 0.0};
  CHECK(max_abs(gys_residual(m, s, {0.2, 0.7})) == 0.0);
  const std::vector<CoordinatePoint> pts = make_grid(std::array<Axis, 2>{Axis{}, Axis{}});
  const LambdaEstimate e = infer_lambda(m, Expr::constant(3.0), 0.0, pts);
  CHECK(e.lambda_hat == 0.0);
  CHECK(e.spread == 0.0);
  CHECK_THROWS_AS(gys_residual(m, {Expr::constant(1.0), 0.0, 0.5}, {0.0, 0.0}), PreconditionError);
  CHECK_THROWS_AS(infer_lambda(m, Expr::constant(1.0), 0.0, {}), PreconditionError);
  CHECK_THROWS_AS(gqy_residual(m, s, {0.0, 0.0, 0.0}), PreconditionError);
}

TEST_CASE("quasi residual reduces to the gradient Yamabe residual") {
  oracle::ExpressionGenerator gen(3, 51);
  for (int trial = 0; trial < 40; ++trial) {
    const zoo::Sample z = zoo::random_metric(gen, trial);
    oracle::ExpressionGenerator fg(z.metric.dim(), 700 + trial, z.metric.coords());
    const SolitonData s{fg.generate(3), gen.uniform(-2, 2), 0.0};
    const Matrix a = gqy_residual(z.metric, s, z.point);
    const Matrix b = gys_residual(z.metric, s, z.point);
    CHECK(a == b);
  }
}

TEST_CASE("one-dimensional quasi soliton") {
  const MetricField m = MetricField::flat({"t"}, {1});
  const SolitonData s{parse_expression("-ln(t)", m.coords()), 0.0, 1.0};
  for (double t : {0.5, 1.0, 1.7, 3.0}) CHECK(std::abs(gqy_residual(m, s, {t})(0, 0)) <= 1e-10);
  const ThetaCheck th = theta_check(m, s, {1.3});
  CHECK(std::abs(th.theta_residual(0, 0)) <= 1e-10);
  CHECK(std::abs(th.identity_residual(0, 0)) <= 1e-10);
}

TEST_CASE("constant potential leaves -(tau - lambda) g") {
  const MetricField sphere = round_sphere(2.0);
  const CoordinatePoint p{1.1, 0.3};
  for (double mu : {0.0, 0.5, -2.0}) {
    const Matrix r = gqy_residual(sphere, {Expr::constant(4.0), 0.1, mu}, p);
    const MetricAtPoint g = metric_at(sphere, p);
    CHECK(max_abs(r + (0.5 - 0.1) * g.g) <= 1e-12);
    CHECK(max_abs(gqy_residual(sphere, {Expr::constant(4.0), 0.5, mu}, p)) <= 1e-12);
  }
}

TEST_CASE("theta substitution") {
  const MetricField sphere = round_sphere(1.0);
  const ThetaCheck zero = theta_check(sphere, {Expr::constant(0.0), 0.5, 1.0}, {1.0, 0.0});
  const MetricAtPoint g = metric_at(sphere, {1.0, 0.0});
  CHECK(max_abs(zero.theta_residual - (2.0 - 0.5) * g.g) <= 1e-12);
  CHECK(max_abs(theta_check(sphere, {Expr::constant(0.0), 2.0, 1.0}, {1.0, 0.0}).theta_residual) <= 1e-12);
  CHECK_THROWS_AS(theta_check(sphere, {Expr::constant(0.0), 2.0, 0.0}, {1.0, 0.0}), PreconditionError);
}

TEST_CASE("the proof identity holds for arbitrary fields") {
  oracle::ExpressionGenerator gen(3, 53);
  for (int trial = 0; trial < 50; ++trial) {
    const zoo::Sample z = zoo::random_metric(gen, trial);
    oracle::ExpressionGenerator fg(z.metric.dim(), 800 + trial, z.metric.coords());
    const double m = gen.uniform(0.5, 3.0);
    const SolitonData s{fg.generate(3), gen.uniform(-2, 2), 1.0 / m};
    const ThetaCheck th = theta_check(z.metric, s, z.point);
    const Matrix hess = covariant_hessian(z.metric, s.phi, z.point);
    CHECK(max_abs(th.identity_residual) <= 1e-9 * std::max(1.0, max_abs(hess)));
    // theta_residual = −(θ/m)·gqy_residual, so the two vanish together.
    const Matrix q = gqy_residual(z.metric, s, z.point);
    const double theta = std::exp(-evaluate(s.phi, z.point.coords()) / m);
    CHECK(max_abs(th.theta_residual + theta / m * q) <= 1e-9 * std::max(1.0, theta / m * max_abs(q)));
  }
}

TEST_CASE("classification") {
  CHECK(classify(1.0, 1e-8) == SolitonClass::shrinking);
  CHECK(classify(0.0, 1e-8) == SolitonClass::steady);
  CHECK(classify(-1e-9, 1e-8) == SolitonClass::steady);
  CHECK(classify(-1.0, 1e-8) == SolitonClass::expanding);
  CHECK(classify(1e-8, 1e-8) == SolitonClass::steady);
  CHECK(to_string(SolitonClass::expanding) == "expanding");
}

TEST_CASE("residual report") {
  const MetricField m = MetricField::flat({"x", "y"}, {1, 1});
  const auto pts = make_grid(std::array<Axis, 2>{Axis{}, Axis{}});
  const ResidualReport ok = residual_report(m, {parse_expression("x^2 + y^2", m.coords()), -2.0, 0.0}, pts, 1e-12);
  CHECK(ok.pass);
  CHECK(ok.max_abs == 0.0);
  const ResidualReport bad = residual_report(m, {parse_expression("x^3", m.coords()), 0.0, 0.0}, pts, 1e-9);
  CHECK(!bad.pass);
  CHECK(bad.max_abs >= bad.mean_abs);
  CHECK(bad.mean_abs >= 0.0);
  CHECK(bad.max_abs == doctest::Approx(6.0));
  CHECK(std::abs(bad.points[bad.worst][0]) == 1.0);
  CHECK(bad.residual_grids.size() == pts.size());
}

TEST_CASE("adding a constant to the potential changes nothing") {
  oracle::ExpressionGenerator gen(3, 57);
  for (int trial = 0; trial < 20; ++trial) {
    const zoo::Sample z = zoo::random_metric(gen, trial);
    oracle::ExpressionGenerator fg(z.metric.dim(), 300 + trial, z.metric.coords());
    const Expr phi = fg.generate(3);
    const Matrix a = gys_residual(z.metric, {phi, 0.3, 0.0}, z.point);
    const Matrix b = gys_residual(z.metric, {phi + 5.0, 0.3, 0.0}, z.point);
    CHECK(max_abs(a - b) <= 1e-12 * std::max(1.0, max_abs(a)));
  }
}

TEST_CASE("GRW with b = t: lambda constancy sweep") {
  const MetricField m = grw_t_metric();
  const auto pts = grw_points();
  auto spread = [&](double alpha, double mu) {
    return infer_lambda(m, alpha * ln(Expr::variable(0, "t")), mu, pts).spread;
  };
  // Quasi instance: φ = −6 ln t, μ = 1/3 is a soliton with λ = 0.
  const LambdaEstimate q = infer_lambda(m, -6.0 * ln(Expr::variable(0, "t")), 1.0 / 3.0, pts);
  CHECK(q.spread <= 1e-8);
  CHECK(std::abs(q.lambda_hat) <= 1e-8);
  CHECK(spread(-6.6, 1.0 / 3.0) > 1e-2);
  CHECK(spread(-5.4, 1.0 / 3.0) > 1e-2);
  CHECK(residual_report(m, {-6.0 * ln(Expr::variable(0, "t")), 0.0, 1.0 / 3.0}, pts, 1e-8).pass);

  // Pure gradient case: λ(p) is constant only at α = −12, and that potential
  // is not a soliton.
  CHECK(spread(-12.0, 0.0) <= 1e-8);
  CHECK(spread(-10.8, 0.0) > 1e-2);
  CHECK(spread(6.0, 0.0) > 1e-2);
  const double lambda = infer_lambda(m, -12.0 * ln(Expr::variable(0, "t")), 0.0, pts).lambda_hat;
  CHECK(residual_report(m, {-12.0 * ln(Expr::variable(0, "t")), lambda, 0.0}, pts, 1e-8).max_abs > 1.0);
}

TEST_CASE("warped product assembly") {
  const MetricField base = MetricField::flat({"s"}, {1});
  const MetricField fiber = MetricField::flat({"u"}, {1});
  const MetricField m = warped_product_metric(base, fiber, Expr::constant(1.0));
  CHECK(m.coords() == std::vector<std::string>{"s", "u"});
  CHECK(metric_at(m, {0.1, 0.2}).g == Matrix::Identity(2, 2));
  CHECK_THROWS_AS(warped_product_metric(base, MetricField::flat({"s"}, {1}), Expr::constant(1.0)),
                  PreconditionError);
}

TEST_CASE("warped product conditions") {
  const MetricField base = MetricField::flat({"s"}, {1});
  const MetricField fiber = MetricField::flat({"u"}, {1});
  const std::vector<CoordinatePoint> bp{{0.1}, {0.5}, {0.9}};
  const std::vector<CoordinatePoint> fp{{-0.5}, {0.5}};
  const std::vector<std::string> chart{"s", "u"};

  const WarpedConditions base_only = warped_conditions_check(
      base, fiber, Expr::constant(1.0), {parse_expression("s^2", chart), 0.0, 1.0}, bp, fp);
  CHECK(base_only.c1 == 0.0);
  CHECK(base_only.c4 == 0.0);

  const WarpedConditions fiber_dep = warped_conditions_check(
      base, fiber, Expr::constant(1.0), {parse_expression("u", chart), 0.0, 1.0}, bp, fp);
  CHECK(fiber_dep.c1 == 1.0);

  CHECK_THROWS_AS(warped_conditions_check(base, fiber, parse_expression("s - 0.5", base.coords()),
                                          {Expr::constant(0.0), 0.0, 1.0}, bp, fp),
                  NonPositiveWarping);
  CHECK_THROWS_AS(warped_conditions_check(base, fiber, Expr::constant(1.0),
                                          {Expr::constant(0.0), 0.0, 0.0}, bp, fp),
                  PreconditionError);
}

TEST_CASE("warped conditions for the certified GRW instance") {
  const MetricField base = MetricField::flat({"t"}, {-1});
  const MetricField fiber = flat_fiber({"x1", "x2", "x3"});
  const std::vector<std::string> chart{"t", "x1", "x2", "x3"};
  std::vector<CoordinatePoint> bp;
  for (double t : linspace(1.0, 2.0, 5)) bp.push_back({t});
  const std::vector<CoordinatePoint> fp{{0, 0, 0}, {1, -1, 0.5}};
  const SolitonData s{parse_expression("-6*ln(t)", chart), 0.0, 1.0 / 3.0};
  const WarpedConditions w = warped_conditions_check(base, fiber, Expr::variable(0, "t"), s, bp, fp);
  CHECK(w.c1 == 0.0);
  CHECK(w.c2 <= 1e-8);
  CHECK(w.c3 <= 1e-8);
  CHECK(w.c4 == 0.0);
  CHECK(w.min_gradient_coupling > 0.1);
}

TEST_CASE("fiber curvature spread") {
  const MetricField base = MetricField::flat({"s"}, {1});
  const std::vector<CoordinatePoint> bp{{0.5}};
  const std::vector<CoordinatePoint> fp{{0.6, 0.0}, {1.5, 0.3}, {2.2, -0.4}};
  const std::vector<std::string> chart{"s", "u", "v"};
  const SolitonData s{parse_expression("s", chart), 0.0, 1.0};
  CHECK(warped_conditions_check(base, round_sphere(2.0), Expr::constant(1.0), s, bp, fp).c4 <= 1e-12);
  // A surface of revolution with non-constant Gaussian curvature.
  const MetricField bumpy = MetricField::diagonal(
      {"u", "v"}, {Expr::constant(1.0), pow(2.0 + cos(Expr::variable(0, "u")), 2)},
      Signature::riemannian(2));
  CHECK(warped_conditions_check(base, bumpy, Expr::constant(1.0), s, bp, fp).c4 > 0.1);
}
