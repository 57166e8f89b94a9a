#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "sollab/cli.hpp"
#include "sollab/curvature.hpp"
#include "sollab/families.hpp"
#include "sollab/grid.hpp"
#include "sollab/parallel.hpp"
#include "sollab/soliton.hpp"

namespace sollab::cli {
namespace {

std::string sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Expr parse_field(const std::string& field, const std::string& text,
                 const std::vector<std::string>& names) {
  try {
    return parse_expression(text, names);
  } catch (const SyntaxError& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  } catch (const UnknownVariable& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

MetricField build_metric(const MetricConfig& m, const std::string& field) {
  if (m.type == "flat") return MetricField::flat(m.coords, m.signs);
  if (m.type == "sphere") return round_sphere(m.radius, m.coords);
  std::vector<std::vector<Expr>> comps;
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    std::vector<Expr> row;
    for (std::size_t j = 0; j < m.components[i].size(); ++j) {
      row.push_back(parse_field(
          field + ".components[" + std::to_string(i) + "][" + std::to_string(j) + "]",
          m.components[i][j], m.coords));
    }
    comps.push_back(std::move(row));
  }
  Signature sig;
  try {
    sig = Signature::parse(m.signature);
  } catch (const Error& e) {
    throw ConfigError("field '" + field + ".signature': " + e.what());
  }
  try {
    return MetricField(m.coords, comps, sig);
  } catch (const PreconditionError& e) {
    throw ConfigError("field '" + field + "': " + e.what());
  }
}

std::vector<Axis> default_axes(const MetricConfig& m) {
  if (m.type == "sphere") return {Axis{0.5, 2.5, 5}, Axis{-1.0, 1.0, 5}};
  return std::vector<Axis>(m.coords.size(), Axis{});
}

const MetricConfig& require_constant_curvature_fiber(const JobConfig& c) {
  const MetricConfig& f = *c.fiber;
  if (f.type != "flat" && f.type != "sphere") {
    throw ConfigError("field 'fiber.type': this family needs a flat or sphere fiber");
  }
  if (f.type == "flat" && std::any_of(f.signs.begin(), f.signs.end(), [](double s) { return s < 0; })) {
    throw ConfigError("field 'fiber.signs': the fiber must be Riemannian");
  }
  return f;
}

struct Table {
  std::string column;
  Expr field;
  std::size_t t_index = 0;
};

struct Problem {
  MetricField metric;
  std::vector<Axis> axes;
  std::optional<Expr> phi;
  bool constructed = false;
  std::vector<std::pair<std::string, Expr>> expressions;
  std::optional<Table> table;
};

Problem build_problem(const JobConfig& c, const Overrides& o) {
  const bool literal = o.paper_literal;
  if (literal && c.family != Family::walker3 && c.family != Family::walker4) {
    throw ConfigError("--paper-literal is defined for walker3 and walker4 only");
  }
  const FormulaVariant variant = literal ? FormulaVariant::paper_literal : FormulaVariant::corrected;

  auto with = [&](MetricField m, std::vector<Axis> axes) {
    Problem p{std::move(m), std::move(axes), std::nullopt, false, {}, std::nullopt};
    return p;
  };
  auto given_potential = [&](Problem& p) {
    if (c.potential) p.phi = parse_field("potential", *c.potential, p.metric.coords());
  };

  switch (c.family) {
    case Family::custom: {
      Problem p = with(build_metric(*c.metric, "metric"), default_axes(*c.metric));
      given_potential(p);
      return p;
    }
    case Family::warped: {
      const MetricField base = build_metric(*c.base, "base");
      const MetricField fiber = build_metric(*c.fiber, "fiber");
      const Expr b = parse_field("warping", *c.warping, base.coords());
      std::vector<Axis> axes = default_axes(*c.base);
      const std::vector<CoordinatePoint> base_samples = make_grid(axes);
      for (const Axis& a : default_axes(*c.fiber)) axes.push_back(a);
      MetricField m = assemble_warped_metric({base, fiber, b}, base_samples);
      Problem p = with(std::move(m), std::move(axes));
      given_potential(p);
      return p;
    }
    case Family::grw: {
      const MetricConfig& fc = require_constant_curvature_fiber(c);
      const std::vector<std::string> t_chart{"t"};
      GRWSpec spec{parse_field("warping", *c.warping, t_chart), build_metric(fc, "fiber"), c.t_min,
                   c.t_max};
      std::vector<Axis> axes{Axis{c.t_min, c.t_max, 5}};
      for (const Axis& a : default_axes(fc)) axes.push_back(a);
      Problem p = with(assemble_grw_metric(spec), std::move(axes));
      if (c.alpha && c.potential) throw ConfigError("field 'alpha': conflicts with 'potential'");
      if (c.alpha) {
        const double t0 = c.t0.value_or(c.t_min);
        if (t0 < c.t_min || t0 > c.t_max) throw ConfigError("field 't0': outside the interval");
        p.phi = grw_potential_field(spec, *c.alpha, t0);
        p.constructed = true;
        p.expressions.emplace_back("phi", *p.phi);
        p.table = Table{"phi", *p.phi, 0};
      } else {
        given_potential(p);
      }
      return p;
    }
    case Family::static_spacetime: {
      const MetricConfig& fc = require_constant_curvature_fiber(c);
      StaticSpec spec{parse_field("lapse", *c.lapse, fc.coords), build_metric(fc, "fiber")};
      const std::vector<Axis> fiber_axes = default_axes(fc);
      const std::vector<CoordinatePoint> samples = make_grid(fiber_axes);
      std::vector<Axis> axes{Axis{}};
      axes.insert(axes.end(), fiber_axes.begin(), fiber_axes.end());
      Problem p = with(assemble_static_metric(spec, samples), std::move(axes));
      given_potential(p);
      return p;
    }
    case Family::walker3: {
      const auto& names = walker3_coords();
      const std::vector<Axis> axes(3, Axis{});
      if (c.eta) {
        if (c.potential) throw ConfigError("field 'potential': conflicts with 'eta'");
        const Walker3Construction wc{c.kappa, parse_field("eta", *c.eta, names),
                                     parse_field("zeta", c.zeta, names)};
        Walker3Potential w;
        try {
          w = walker3_construct(wc, variant);
        } catch (const PreconditionError& e) {
          throw ConfigError(std::string("field 'eta': ") + e.what());
        } catch (const NonPositiveEtaPrime& e) {
          throw ConfigError(std::string("field 'eta': ") + e.what());
        }
        Problem p = with(walker3_metric({w.phi_metric}), axes);
        p.phi = w.f;
        p.constructed = true;
        p.expressions = {{"f", w.f}, {"phi_metric", w.phi_metric}};
        return p;
      }
      Problem p = with(walker3_metric({parse_field("phi_metric", *c.phi_metric, names)}), axes);
      given_potential(p);
      return p;
    }
    case Family::walker4: {
      const auto& names = walker4_coords();
      Walker4Spec spec{parse_field("b", *c.b, names), c.c0, c.c1, c.c2, c.c3, c.t0.value_or(0.0)};
      MetricField m = [&] {
        try {
          return walker4_metric(spec);
        } catch (const PreconditionError& e) {
          throw ConfigError(std::string("field 'b': ") + e.what());
        }
      }();
      Problem p = with(std::move(m), std::vector<Axis>(4, Axis{}));
      if (c.potential) {
        given_potential(p);
        return p;
      }
      const std::vector<double> ts = linspace(-1.0, 1.0, 5);
      const Walker4Potential w = walker4_construct(spec, variant, ts);
      p.phi = w.f;
      p.constructed = true;
      p.expressions = {{"f", w.f}, {"E", w.E}};
      p.table = Table{"E", w.E, 3};
      return p;
    }
  }
  throw ConfigError("field 'family': unsupported");
}

std::vector<Axis> resolve_axes(const JobConfig& c, const Overrides& o, const Problem& p) {
  std::vector<Axis> axes = c.grid.empty() ? p.axes : c.grid;
  if (axes.size() != p.metric.dim()) {
    throw ConfigError("field 'grid': expected " + std::to_string(p.metric.dim()) + " axes, got " +
                      std::to_string(axes.size()));
  }
  if (o.grid_count) {
    if (*o.grid_count < 2) throw ConfigError("--grid must be at least 2");
    for (Axis& a : axes) a.count = *o.grid_count;
  }
  return axes;
}

double tolerance_of(const JobConfig& c, const Overrides& o) {
  const double tol = o.tolerance.value_or(c.tolerance);
  if (!(tol > 0.0)) throw ConfigError("--tol must be positive");
  return tol;
}

std::optional<std::string> output_of(const JobConfig& c, const Overrides& o) {
  return o.out ? o.out : c.output;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ConfigError("cannot open output file '" + path + "'");
  f << content;
  if (!f) throw ConfigError("cannot write output file '" + path + "'");
}

std::string header(const std::vector<std::string>& coords, const std::vector<std::string>& extra) {
  std::string h = "#schema=1\n";
  bool first = true;
  for (const auto& list : {coords, extra}) {
    for (const auto& name : list) {
      if (!first) h += ',';
      h += name;
      first = false;
    }
  }
  return h + '\n';
}

std::string point_text(const std::vector<std::string>& names, const CoordinatePoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.dim(); ++i) {
    if (i) s += ", ";
    s += names[i] + "=" + short_num(p[i]);
  }
  return s + ")";
}

void append_row(std::string& csv, const CoordinatePoint& p, std::initializer_list<double> values) {
  bool first = true;
  for (double x : p.coords()) {
    if (!first) csv += ',';
    csv += sci(x);
    first = false;
  }
  for (double v : values) csv += ',' + sci(v);
}

struct VerifyOutcome {
  bool pass = false;
  std::string csv;
  std::string verdict;
};

VerifyOutcome verify_problem(const Problem& p, const JobConfig& c, double tol,
                             std::span<const CoordinatePoint> points) {
  const Expr& phi = *p.phi;
  const LambdaEstimate est = infer_lambda(p.metric, phi, c.mu, points);
  const double lambda = c.lambda.value_or(est.lambda_hat);
  const ResidualReport rep = residual_report(p.metric, {phi, lambda, c.mu}, points, tol);

  struct Extra {
    double tau, lap;
  };
  const auto extras = parallel_map(points.size(), [&](std::size_t i) {
    const PointGeometry g = PointGeometry::at(p.metric, points[i]);
    return Extra{g.curvature.tau, laplace_beltrami(g.metric, g.connection, eval_jet2(phi, points[i]))};
  });

  const auto& names = p.metric.coords();
  VerifyOutcome v;
  v.csv = header(names, {"residual_max", "tau", "laplacian", "lambda_p", "finite"});
  bool all_finite = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double r = rep.pointwise_max[i];
    const bool finite = std::isfinite(r) && std::isfinite(extras[i].tau) &&
                        std::isfinite(extras[i].lap) && std::isfinite(est.pointwise[i]);
    all_finite = all_finite && finite;
    append_row(v.csv, points[i], {r, extras[i].tau, extras[i].lap, est.pointwise[i]});
    v.csv += finite ? ",1\n" : ",0\n";
  }

  v.pass = all_finite && rep.pass && est.spread <= tol;
  if (v.pass) {
    const SolitonClass cls = classify(lambda, tol);
    const double shown = cls == SolitonClass::steady ? 0.0 : lambda;
    v.verdict = "PASS \xce\xbb=" + short_num(shown) + " class=" + std::string(to_string(cls)) + "\n";
  } else {
    v.verdict = "FAIL max_residual=" + sci(rep.max_abs) + " at " +
                point_text(names, points[rep.worst]) + "\n";
    if (est.spread > tol) v.verdict += "lambda spread " + sci(est.spread) + " exceeds tolerance\n";
  }
  return v;
}

}  // namespace

int run_curvature(const JobConfig& c, const Overrides& o, std::ostream& out) {
  const Problem p = build_problem(c, o);
  const std::vector<CoordinatePoint> points = make_grid(resolve_axes(c, o, p));
  const auto& names = p.metric.coords();
  const std::size_t n = names.size();

  std::vector<std::string> cols{"tau"};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) cols.push_back("ricci_" + names[i] + "_" + names[j]);
  }
  const auto curv = parallel_map(points.size(),
                                 [&](std::size_t i) { return curvature_at(p.metric, points[i]); });

  std::string csv = header(names, cols);
  double tau_min = curv.front().tau, tau_max = curv.front().tau, ricci_max = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    append_row(csv, points[k], {curv[k].tau});
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        const double r = curv[k].ricci(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        csv += ',' + sci(r);
        ricci_max = std::max(ricci_max, std::abs(r));
      }
    }
    csv += '\n';
    tau_min = std::min(tau_min, curv[k].tau);
    tau_max = std::max(tau_max, curv[k].tau);
  }
  if (const auto path = output_of(c, o)) write_file(*path, csv);
  out << "OK points=" << points.size() << " tau_min=" << sci(tau_min) << " tau_max=" << sci(tau_max)
      << " ricci_max=" << sci(ricci_max) << "\n";
  return kPass;
}

int run_verify(const JobConfig& c, const Overrides& o, std::ostream& out) {
  const Problem p = build_problem(c, o);
  if (!p.phi) throw ConfigError("field 'potential': required for verify");
  const double tol = tolerance_of(c, o);
  const std::vector<CoordinatePoint> points = make_grid(resolve_axes(c, o, p));
  const VerifyOutcome v = verify_problem(p, c, tol, points);
  if (const auto path = output_of(c, o)) write_file(*path, v.csv);
  out << v.verdict;
  return v.pass ? kPass : kFail;
}

int run_construct(const JobConfig& c, const Overrides& o, std::ostream& out) {
  if (c.family != Family::grw && c.family != Family::walker3 && c.family != Family::walker4) {
    throw ConfigError("field 'family': construct supports grw, walker3 and walker4");
  }
  const Problem p = build_problem(c, o);
  if (!p.constructed) {
    const char* need = c.family == Family::grw       ? "field 'alpha': required for construct"
                       : c.family == Family::walker3 ? "field 'eta': required for construct"
                                                     : "field 'potential': not allowed for construct";
    throw ConfigError(need);
  }
  const double tol = tolerance_of(c, o);
  const std::vector<Axis> axes = resolve_axes(c, o, p);

  std::string text = "#schema=1\n# family=" + std::string(to_string(c.family)) + "\n";
  for (const auto& [name, e] : p.expressions) {
    text += "# " + name + " = " + to_string(e) + "\n";
    out << name << " = " << to_string(e) << "\n";
  }
  if (p.table) {
    const Axis& a = axes[p.table->t_index];
    const std::vector<double> ts = linspace(a.min, a.max, a.count);
    const std::vector<double> vals = sample_in_t(p.table->field, p.table->t_index, p.metric.dim(), ts);
    text += "t," + p.table->column + "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) text += sci(ts[i]) + "," + sci(vals[i]) + "\n";
  }

  const std::vector<CoordinatePoint> points = make_grid(axes);
  const VerifyOutcome v = verify_problem(p, c, tol, points);
  if (const auto path = output_of(c, o)) {
    write_file(*path, text);
    write_file(*path + ".verify.csv", v.csv);
  }
  out << v.verdict;
  return v.pass ? kPass : kFail;
}

}  // namespace sollab::cli
