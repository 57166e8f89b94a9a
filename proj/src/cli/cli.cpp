#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "sollab/cli.hpp"

namespace sollab::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Curvature and Yamabe soliton verification over coordinate charts", "soliton-lab"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  std::string out_path;
  double tol = 0.0;
  int grid = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "JSON job file")->required();
    sub->add_option("--out", out_path, "CSV output path");
    sub->add_option("--tol", tol, "residual tolerance");
    sub->add_option("--grid", grid, "points per grid axis");
    sub->add_flag("--paper-literal", o.paper_literal, "use the printed walker3/walker4 formulas");
  };
  CLI::App* curvature = app.add_subcommand("curvature", "scalar and Ricci curvature over the grid");
  CLI::App* verify = app.add_subcommand("verify", "soliton residuals for a given potential");
  CLI::App* construct = app.add_subcommand("construct", "build the family potential and verify it");
  for (CLI::App* sub : {curvature, verify, construct}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kConfigError;
  }

  for (CLI::App* sub : {curvature, verify, construct}) {
    if (!sub->parsed()) continue;
    if (sub->count("--out")) o.out = out_path;
    if (sub->count("--tol")) o.tolerance = tol;
    if (sub->count("--grid")) o.grid_count = grid;
  }

  try {
    const JobConfig config = parse_config(read_file(config_path));
    if (curvature->parsed()) return run_curvature(config, o, out);
    if (verify->parsed()) return run_verify(config, o, out);
    return run_construct(config, o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const SyntaxError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnknownVariable& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  }
}

}  // namespace sollab::cli
