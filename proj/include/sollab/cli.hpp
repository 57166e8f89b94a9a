#pragma once

// Configuration-driven front end behind the soliton-lab executable.

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sollab/errors.hpp"
#include "sollab/grid.hpp"

namespace sollab::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kConfigError = 2, kNumericFailure = 3 };

// Malformed or inconsistent configuration. The message names the field or
// the line of the JSON document.
class ConfigError : public Error {
public:
  using Error::Error;
};

enum class Family { custom, warped, grw, static_spacetime, walker3, walker4 };

std::string_view to_string(Family f);

// A metric described in the config. "flat" uses `signs` (default all +1),
// "sphere" the round 2-sphere of `radius`, "custom" explicit component strings.
struct MetricConfig {
  std::string type = "custom";
  std::vector<std::string> coords;
  std::vector<double> signs;
  double radius = 1.0;
  std::vector<std::vector<std::string>> components;
  std::string signature;
};

struct JobConfig {
  Family family = Family::custom;

  std::optional<MetricConfig> metric;  // custom
  std::optional<MetricConfig> base;    // warped
  std::optional<MetricConfig> fiber;   // warped, grw, static
  std::optional<std::string> warping;  // warped (base chart), grw (t)
  std::optional<std::string> lapse;    // static (fiber chart)
  double t_min = 1.0;                  // grw interval
  double t_max = 2.0;
  std::optional<double> alpha;         // grw
  std::optional<double> t0;            // grw, walker4

  std::optional<std::string> phi_metric;  // walker3
  double kappa = 0.0;
  std::optional<std::string> eta;
  std::string zeta = "0";

  std::optional<std::string> b;  // walker4
  double c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;

  std::optional<std::string> potential;  // over the full chart
  std::optional<double> lambda;          // inferred when absent
  double mu = 0.0;

  std::vector<Axis> grid;  // empty: family defaults
  double tolerance = 1e-9;
  std::optional<std::string> output;
};

// Strict parse: unknown keys, wrong types and missing required fields throw
// ConfigError.
JobConfig parse_config(std::string_view json_text);

struct Overrides {
  std::optional<std::string> out;
  std::optional<double> tolerance;
  std::optional<int> grid_count;
  bool paper_literal = false;
};

int run_curvature(const JobConfig& config, const Overrides& o, std::ostream& out);
int run_verify(const JobConfig& config, const Overrides& o, std::ostream& out);
int run_construct(const JobConfig& config, const Overrides& o, std::ostream& out);

// args excludes the program name. Errors go to `err`; the return value is the
// process exit code.
int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace sollab::cli
