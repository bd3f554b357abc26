// planlab CLI: adaptation runs, parameter sweeps, one-shot rollouts, scripted
// search traces, and CSV-to-SVG plotting.
//
// Exit codes: 0 ok, 2 configuration error, 3 runtime failure.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "planlab/planlab.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string out_dir;
  std::string variant;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool config_required) {
  auto* copt = cmd->add_option("--config", f.config_path, "run configuration file");
  if (config_required) copt->required();
  cmd->add_option("--seed", f.seed, "master seed (overrides config)")
      ->each([&f](const std::string&) { f.seed_set = true; });
  cmd->add_option("--out", f.out_dir, "output directory (overrides config)");
  cmd->add_option("--variant", f.variant, "pattern search variant: alg2 | alg3")
      ->check(CLI::IsMember({"alg2", "alg3"}));
  cmd->add_flag("--verbose", f.verbose, "per-episode logging");
}

planlab::RunConfig load_config(const CommonFlags& f) {
  planlab::RunConfig cfg =
      f.config_path.empty() ? planlab::RunConfig{} : planlab::parse_config_file(f.config_path);
  if (f.seed_set) cfg.seed = f.seed;
  if (!f.out_dir.empty()) cfg.out_dir = f.out_dir;
  if (!f.variant.empty())
    cfg.variant = f.variant == "alg2" ? planlab::SearchVariant::Alg2
                                      : planlab::SearchVariant::Alg3;
  if (f.verbose) cfg.verbose = true;
  cfg.validate();
  return cfg;
}

std::vector<std::string> split_tokens(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep || ch == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"waypoint-graph planning lab with online parameter adaptation"};
  app.require_subcommand(1);

  CommonFlags adapt_f, sweep_f, rollout_f, trace_f;

  auto* adapt = app.add_subcommand("adapt", "run the online adaptation loop");
  add_common(adapt, adapt_f, true);

  auto* sweep = app.add_subcommand("sweep", "evaluate along one parameter");
  add_common(sweep, sweep_f, true);
  std::string sweep_param, sweep_values;
  double sweep_fixed = 0.0;
  int sweep_reps = 1;
  sweep->add_option("--param", sweep_param, "swept parameter: w | e")
      ->required()
      ->check(CLI::IsMember({"w", "e"}));
  sweep->add_option("--values", sweep_values, "comma-separated value list")->required();
  sweep->add_option("--fixed", sweep_fixed, "value of the non-swept parameter")->required();
  sweep->add_option("--reps", sweep_reps, "repetitions per value");

  auto* rollout = app.add_subcommand("rollout", "one-shot evaluation at fixed (w, e)");
  add_common(rollout, rollout_f, true);
  double ro_w = 0.0, ro_e = 0.0;
  bool ro_dump = false;
  rollout->add_option("--w", ro_w, "waypoint count")->required();
  rollout->add_option("--e", ro_e, "maximum edge length")->required();
  rollout->add_flag("--dump-graph", ro_dump, "write the first setting's graph as CSV");

  auto* trace = app.add_subcommand("trace-search", "drive the update rule with a script");
  add_common(trace, trace_f, false);
  std::string script;
  trace->add_option("--script", script, "outcome tokens, e.g. \"NP NP NP S\"")->required();

  auto* plot = app.add_subcommand("plot", "render CSV columns as an SVG line chart");
  std::string plot_csv, plot_x, plot_cols, plot_out, plot_title = "planlab";
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--x", plot_x, "x column name")->required();
  plot->add_option("--columns", plot_cols, "comma-separated y column names")->required();
  plot->add_option("--out-svg", plot_out, "output SVG path")->required();
  plot->add_option("--title", plot_title, "chart title");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : planlab::kExitConfig;
  }

  try {
    if (*adapt) return planlab::cmd_adapt(load_config(adapt_f));
    if (*sweep) {
      planlab::SweepSpec spec;
      spec.param = sweep_param;
      for (const std::string& v : split_tokens(sweep_values, ','))
        spec.values.push_back(std::stod(v));
      spec.fixed_value = sweep_fixed;
      spec.reps = sweep_reps;
      return planlab::cmd_sweep(load_config(sweep_f), spec);
    }
    if (*rollout)
      return planlab::cmd_rollout(load_config(rollout_f), ro_w, ro_e, ro_dump);
    if (*trace)
      return planlab::cmd_trace_search(load_config(trace_f), split_tokens(script, ' '));
    if (*plot)
      return planlab::cmd_plot(plot_csv, plot_x, split_tokens(plot_cols, ','), plot_out,
                               plot_title);
  } catch (const planlab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return planlab::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return planlab::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return planlab::kExitRuntime;
  }
  return planlab::kExitConfig;
}
