#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <set>

#include "json.hpp"
#include "sollab/cli.hpp"

namespace sollab::cli {
namespace {

using nlohmann::json;

struct FamilyName {
  Family family;
  std::string_view name;
};

constexpr std::array<FamilyName, 6> kFamilies{{{Family::custom, "custom"},
                                                {Family::warped, "warped"},
                                                {Family::grw, "grw"},
                                                {Family::static_spacetime, "static"},
                                                {Family::walker3, "walker3"},
                                                {Family::walker4, "walker4"}}};

const std::set<std::string> kCommonKeys{"family", "grid",   "tolerance", "output",
                                        "potential", "lambda", "mu"};

std::set<std::string> family_keys(Family f) {
  switch (f) {
    case Family::custom: return {"metric"};
    case Family::warped: return {"base", "fiber", "warping"};
    case Family::grw: return {"warping", "fiber", "interval", "alpha", "t0"};
    case Family::static_spacetime: return {"lapse", "fiber"};
    case Family::walker3: return {"phi_metric", "kappa", "eta", "zeta"};
    case Family::walker4: return {"b", "c0", "c1", "c2", "c3", "t0"};
  }
  return {};
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ConfigError("field '" + field + "': " + what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.contains(item.key())) {
      fail(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(field, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(field, "must be finite");
  return d;
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) fail(field, "expected a string");
  std::string s = v.get<std::string>();
  if (s.empty()) fail(field, "must not be empty");
  return s;
}

// Expression-valued entries may be written as numbers for convenience.
std::string get_expression(const json& v, const std::string& field) {
  if (v.is_number()) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", get_number(v, field));
    return buf;
  }
  return get_string(v, field);
}

std::vector<std::string> get_names(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(field, "expected a nonempty array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(get_string(v[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

MetricConfig get_metric(const json& v, const std::string& field) {
  if (!v.is_object()) fail(field, "expected an object");
  MetricConfig m;
  if (v.contains("type")) m.type = get_string(v["type"], field + ".type");
  if (!v.contains("coords")) fail(field + ".coords", "required");
  m.coords = get_names(v["coords"], field + ".coords");

  if (m.type == "flat") {
    check_keys(v, {"type", "coords", "signs"}, field);
    if (v.contains("signs")) {
      const json& s = v["signs"];
      if (!s.is_array() || s.size() != m.coords.size()) {
        fail(field + ".signs", "expected one entry per coordinate");
      }
      for (std::size_t i = 0; i < s.size(); ++i) {
        const double d = get_number(s[i], field + ".signs[" + std::to_string(i) + "]");
        if (d != 1.0 && d != -1.0) fail(field + ".signs", "entries must be +1 or -1");
        m.signs.push_back(d);
      }
    } else {
      m.signs.assign(m.coords.size(), 1.0);
    }
  } else if (m.type == "sphere") {
    check_keys(v, {"type", "coords", "radius"}, field);
    if (m.coords.size() != 2) fail(field + ".coords", "a sphere has two coordinates");
    if (v.contains("radius")) m.radius = get_number(v["radius"], field + ".radius");
    if (!(m.radius > 0.0)) fail(field + ".radius", "must be positive");
  } else if (m.type == "custom") {
    check_keys(v, {"type", "coords", "components", "signature"}, field);
    if (!v.contains("components")) fail(field + ".components", "required");
    const json& c = v["components"];
    const std::size_t n = m.coords.size();
    if (!c.is_array() || c.size() != n) fail(field + ".components", "expected an n x n array");
    for (std::size_t i = 0; i < n; ++i) {
      const std::string row_field = field + ".components[" + std::to_string(i) + "]";
      if (!c[i].is_array() || c[i].size() != n) fail(row_field, "expected a row of length n");
      std::vector<std::string> row;
      for (std::size_t j = 0; j < n; ++j) {
        row.push_back(get_expression(c[i][j], row_field + "[" + std::to_string(j) + "]"));
      }
      m.components.push_back(std::move(row));
    }
    if (!v.contains("signature")) fail(field + ".signature", "required");
    m.signature = get_string(v["signature"], field + ".signature");
  } else {
    fail(field + ".type", "expected flat, sphere or custom");
  }
  return m;
}

std::vector<Axis> get_grid(const json& v) {
  if (!v.is_array() || v.empty()) fail("grid", "expected a nonempty array of axes");
  std::vector<Axis> axes;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string f = "grid[" + std::to_string(i) + "]";
    const json& a = v[i];
    if (!a.is_object()) fail(f, "expected an object with min, max, count");
    check_keys(a, {"min", "max", "count"}, f);
    for (const char* k : {"min", "max", "count"}) {
      if (!a.contains(k)) fail(f + "." + k, "required");
    }
    Axis axis;
    axis.min = get_number(a["min"], f + ".min");
    axis.max = get_number(a["max"], f + ".max");
    if (!a["count"].is_number_integer()) fail(f + ".count", "expected an integer");
    axis.count = a["count"].get<int>();
    if (axis.count < 2) fail(f + ".count", "must be at least 2");
    if (!(axis.min < axis.max)) fail(f, "min must be below max");
    axes.push_back(axis);
  }
  return axes;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string_view to_string(Family f) {
  for (const auto& e : kFamilies) {
    if (e.family == f) return e.name;
  }
  return "custom";
}

JobConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) +
                      ": invalid JSON");
  }
  if (!doc.is_object()) throw ConfigError("line 1: top level must be an object");
  if (!doc.contains("family")) fail("family", "required");

  JobConfig c;
  const std::string fam = get_string(doc["family"], "family");
  const auto it = std::find_if(kFamilies.begin(), kFamilies.end(),
                               [&](const FamilyName& e) { return e.name == fam; });
  if (it == kFamilies.end()) {
    fail("family", "expected custom, warped, grw, static, walker3 or walker4");
  }
  c.family = it->family;

  std::set<std::string> allowed = kCommonKeys;
  allowed.merge(family_keys(c.family));
  check_keys(doc, allowed, "");

  auto opt_string = [&](const char* key, std::optional<std::string>& dst) {
    if (doc.contains(key)) dst = get_expression(doc[key], key);
  };
  auto number = [&](const char* key, double& dst) {
    if (doc.contains(key)) dst = get_number(doc[key], key);
  };
  auto opt_number = [&](const char* key, std::optional<double>& dst) {
    if (doc.contains(key)) dst = get_number(doc[key], key);
  };

  if (doc.contains("grid")) c.grid = get_grid(doc["grid"]);
  number("tolerance", c.tolerance);
  if (!(c.tolerance > 0.0)) fail("tolerance", "must be positive");
  if (doc.contains("output")) c.output = get_string(doc["output"], "output");
  opt_string("potential", c.potential);
  opt_number("lambda", c.lambda);
  number("mu", c.mu);

  switch (c.family) {
    case Family::custom:
      if (!doc.contains("metric")) fail("metric", "required");
      c.metric = get_metric(doc["metric"], "metric");
      break;
    case Family::warped:
      for (const char* k : {"base", "fiber", "warping"}) {
        if (!doc.contains(k)) fail(k, "required");
      }
      c.base = get_metric(doc["base"], "base");
      c.fiber = get_metric(doc["fiber"], "fiber");
      opt_string("warping", c.warping);
      break;
    case Family::grw:
      for (const char* k : {"fiber", "warping"}) {
        if (!doc.contains(k)) fail(k, "required");
      }
      c.fiber = get_metric(doc["fiber"], "fiber");
      opt_string("warping", c.warping);
      if (doc.contains("interval")) {
        const json& iv = doc["interval"];
        if (!iv.is_array() || iv.size() != 2) fail("interval", "expected [t_min, t_max]");
        c.t_min = get_number(iv[0], "interval[0]");
        c.t_max = get_number(iv[1], "interval[1]");
        if (!(c.t_min < c.t_max)) fail("interval", "t_min must be below t_max");
      }
      opt_number("alpha", c.alpha);
      opt_number("t0", c.t0);
      break;
    case Family::static_spacetime:
      for (const char* k : {"fiber", "lapse"}) {
        if (!doc.contains(k)) fail(k, "required");
      }
      c.fiber = get_metric(doc["fiber"], "fiber");
      opt_string("lapse", c.lapse);
      break;
    case Family::walker3:
      opt_string("phi_metric", c.phi_metric);
      number("kappa", c.kappa);
      opt_string("eta", c.eta);
      if (doc.contains("zeta")) c.zeta = get_expression(doc["zeta"], "zeta");
      if (!c.phi_metric && !c.eta) fail("phi_metric", "required unless 'eta' is given");
      if (c.phi_metric && c.eta) fail("eta", "conflicts with 'phi_metric'");
      break;
    case Family::walker4:
      if (!doc.contains("b")) fail("b", "required");
      opt_string("b", c.b);
      number("c0", c.c0);
      number("c1", c.c1);
      number("c2", c.c2);
      number("c3", c.c3);
      opt_number("t0", c.t0);
      break;
  }
  return c;
}

}  // namespace sollab::cli
