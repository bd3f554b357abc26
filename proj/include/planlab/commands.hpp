#pragma once
// Command implementations behind the CLI subcommands. Everything writes
// deterministic CSV/SVG from (config, seed) so runs can be diffed byte for
// byte.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "planlab/adapt.hpp"
#include "planlab/config.hpp"
#include "planlab/csv.hpp"
#include "planlab/svg.hpp"

namespace planlab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

inline std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::filesystem::path dir = cfg.out_dir;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace detail

// Column order is part of the output contract; see README.
inline std::string adapt_trace_csv(const AdaptTrace& trace) {
  std::ostringstream os;
  os << "iteration,w,e,rate_success,rate_cannot_reach,rate_no_path,avg_task_time,"
        "action,d_w,k_w,n_w,d_e\n";
  for (const AdaptRecord& r : trace.rows) {
    write_csv_row(os, {std::to_string(r.iteration), fmt_num(r.w), fmt_num(r.e),
                       fmt_num(r.stats.rate_success), fmt_num(r.stats.rate_cannot_reach),
                       fmt_num(r.stats.rate_no_path), fmt_opt(r.stats.avg_task_time),
                       to_string(r.action), fmt_num(r.d_w), fmt_num(r.k_w),
                       std::to_string(r.n_w), fmt_num(r.d_e)});
  }
  return os.str();
}

inline std::string adapt_trace_svg(const AdaptTrace& trace) {
  ChartSeries w_series{"w", {}, {}}, e_series{"e", {}, {}}, sr{"success_rate", {}, {}};
  for (const AdaptRecord& r : trace.rows) {
    double it = r.iteration;
    w_series.x.push_back(it);
    w_series.y.push_back(r.w);
    e_series.x.push_back(it);
    e_series.y.push_back(r.e);
    sr.x.push_back(it);
    sr.y.push_back(r.stats.rate_success * 100.0);  // percent, same canvas as w
  }
  return render_line_chart("parameter adaptation", "iteration",
                           {w_series, e_series, sr});
}

// Full adaptation run: trace CSV plus a line plot.
inline int cmd_adapt(const RunConfig& cfg, std::ostream& log = std::cout) {
  MazeWorld world = cfg.make_world();
  DistanceEstimator est = cfg.make_estimator(world);
  RolloutOptions opts;
  opts.threads = cfg.threads;
  opts.replan = cfg.replan;
  Evaluator ev = make_sim_evaluator(world, cfg.model, est, cfg.protocol, cfg.seed, opts);
  IterationObserver observer;
  if (cfg.verbose)
    observer = [&log](const AdaptRecord& r) {
      log << "iter " << r.iteration << " w=" << fmt_num(r.w) << " e=" << fmt_num(r.e)
          << " success=" << fmt_num(r.stats.rate_success)
          << " cannot_reach=" << fmt_num(r.stats.rate_cannot_reach)
          << " no_path=" << fmt_num(r.stats.rate_no_path) << " action=" << to_string(r.action)
          << " d_w=" << fmt_num(r.d_w) << std::endl;
    };
  AdaptTrace trace = run_adaptation(ev, cfg.make_adapt_config(), observer);

  auto dir = detail::ensure_out_dir(cfg);
  detail::write_file(dir / "adapt_trace.csv", adapt_trace_csv(trace));
  detail::write_file(dir / "adapt_trace.svg", adapt_trace_svg(trace));
  if (!trace.rows.empty()) {
    const AdaptRecord& last = trace.rows.back();
    log << "iterations=" << trace.rows.size()
        << " terminated=" << (trace.terminated_normally ? "yes" : "no")
        << " final_w=" << fmt_num(last.w) << " final_e=" << fmt_num(last.e) << "\n";
  }
  return kExitOk;
}

struct SweepSpec {
  std::string param;           // "w" or "e"
  std::vector<double> values;  // nonempty
  double fixed_value = 0.0;    // the other parameter
  int reps = 1;

  void validate() const {
    if (param != "w" && param != "e") throw ConfigError("sweep param must be 'w' or 'e'");
    if (values.empty()) throw ConfigError("sweep needs a nonempty value list");
    if (reps < 1) throw ConfigError("sweep repetitions must be >= 1");
    if (fixed_value <= 0) throw ConfigError("fixed parameter value must be > 0");
  }
};

struct SweepRow {
  double value = 0.0;
  double rate_success = 0.0, rate_cannot_reach = 0.0, rate_no_path = 0.0;
  std::optional<double> avg_task_time;  // success-weighted across reps
  std::optional<double> avg_queries;
  long episodes = 0;
};

inline std::vector<SweepRow> run_sweep(const RunConfig& cfg, const SweepSpec& sweep) {
  sweep.validate();
  MazeWorld world = cfg.make_world();
  DistanceEstimator est = cfg.make_estimator(world);
  RolloutOptions opts;
  opts.threads = cfg.threads;
  opts.replan = cfg.replan;

  std::vector<SweepRow> rows;
  for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
    double v = sweep.values[vi];
    double w = sweep.param == "w" ? v : sweep.fixed_value;
    double e = sweep.param == "e" ? v : sweep.fixed_value;
    SweepRow row;
    row.value = v;
    double sum_s = 0, sum_cr = 0, sum_np = 0;
    double success_n = 0, time_sum = 0, query_sum = 0;
    for (int rep = 0; rep < sweep.reps; ++rep) {
      std::uint64_t seed = hash_mix(cfg.seed, hash_mix(0x53EEull + vi, static_cast<std::uint64_t>(rep)));
      RolloutStats st = evaluate(world, cfg.model, est, w, e, cfg.protocol, seed, opts);
      row.episodes += st.episodes;
      sum_s += st.rate_success * st.episodes;
      sum_cr += st.rate_cannot_reach * st.episodes;
      sum_np += st.rate_no_path * st.episodes;
      double succ = st.rate_success * st.episodes;
      if (st.avg_task_time) {
        success_n += succ;
        time_sum += *st.avg_task_time * succ;
        query_sum += st.avg_queries.value_or(0.0) * succ;
      }
    }
    row.rate_success = sum_s / row.episodes;
    row.rate_cannot_reach = sum_cr / row.episodes;
    row.rate_no_path = sum_np / row.episodes;
    if (success_n > 0) {
      row.avg_task_time = time_sum / success_n;
      row.avg_queries = query_sum / success_n;
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string sweep_csv(const std::string& param, const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << param << ",rate_success,rate_cannot_reach,rate_no_path,avg_task_time,"
        "avg_queries,episodes\n";
  for (const SweepRow& r : rows) {
    write_csv_row(os, {fmt_num(r.value), fmt_num(r.rate_success), fmt_num(r.rate_cannot_reach),
                       fmt_num(r.rate_no_path), fmt_opt(r.avg_task_time),
                       fmt_opt(r.avg_queries), std::to_string(r.episodes)});
  }
  return os.str();
}

inline int cmd_sweep(const RunConfig& cfg, const SweepSpec& sweep,
                     std::ostream& log = std::cout) {
  auto rows = run_sweep(cfg, sweep);
  ChartSeries s{"rate_success", {}, {}}, cr{"rate_cannot_reach", {}, {}},
      np{"rate_no_path", {}, {}};
  for (const SweepRow& r : rows) {
    s.x.push_back(r.value);
    s.y.push_back(r.rate_success);
    cr.x.push_back(r.value);
    cr.y.push_back(r.rate_cannot_reach);
    np.x.push_back(r.value);
    np.y.push_back(r.rate_no_path);
  }
  auto dir = detail::ensure_out_dir(cfg);
  std::string base = "sweep_" + sweep.param;
  detail::write_file(dir / (base + ".csv"), sweep_csv(sweep.param, rows));
  detail::write_file(dir / (base + ".svg"),
                     render_line_chart("parameter sweep", sweep.param, {s, cr, np}));
  log << "sweep points=" << rows.size() << "\n";
  return kExitOk;
}

// One-shot evaluation at a fixed (w, e).
inline int cmd_rollout(const RunConfig& cfg, double w, double e, bool dump_graph,
                       std::ostream& log = std::cout) {
  if (w < 1 || e <= 0) throw ConfigError("rollout needs w >= 1 and e > 0");
  MazeWorld world = cfg.make_world();
  DistanceEstimator est = cfg.make_estimator(world);
  RolloutOptions opts;
  opts.threads = cfg.threads;
  opts.replan = cfg.replan;

  auto dir = detail::ensure_out_dir(cfg);
  std::ostringstream episodes;
  if (cfg.verbose) {
    episodes << "setting,task,tag,steps,path_waypoints\n";
    opts.episode_log = &episodes;
  }
  RolloutStats st = evaluate(world, cfg.model, est, w, e, cfg.protocol, cfg.seed, opts);
  log << "episodes=" << st.episodes << " success=" << fmt_num(st.rate_success)
      << " cannot_reach=" << fmt_num(st.rate_cannot_reach)
      << " no_path=" << fmt_num(st.rate_no_path)
      << " avg_task_time=" << (st.avg_task_time ? fmt_num(*st.avg_task_time) : "-")
      << "\n";
  if (cfg.verbose) detail::write_file(dir / "episodes.csv", episodes.str());
  if (dump_graph) {
    DistanceEstimator local = est.fresh_clone();
    Rng rng = Rng::stream(cfg.seed, {0xA11CEull, 0});
    PlanningGraph g = build_graph(world, local, w, e, rng);
    std::ostringstream gs;
    dump_graph_csv(g, gs);
    detail::write_file(dir / "graph.csv", gs.str());
  }
  return kExitOk;
}

// Feeds a scripted outcome sequence through the update rule and dumps the
// post-update state per step.
inline std::string trace_search_csv(const RunConfig& cfg,
                                    const std::vector<std::string>& tokens) {
  Evaluator ev = make_scripted_evaluator(tokens);  // validates tokens
  AdaptConfig ac = cfg.make_adapt_config();
  std::ostringstream os;
  os << "step,outcome,action,w,e,k_w,n_w,d_w,c_w,k_e,n_e,d_e,terminated\n";
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (terminated(ac.w_state)) break;
    RolloutStats st = ev(ac.w_state.value, ac.e_state.value, static_cast<int>(i));
    AdaptAction action = update_once(st, ac);
    write_csv_row(os, {std::to_string(i), tokens[i], to_string(action),
                       fmt_num(ac.w_state.value), fmt_num(ac.e_state.value),
                       fmt_num(ac.w_state.k), std::to_string(ac.w_state.n),
                       fmt_num(ac.w_state.dec), std::to_string(ac.w_state.c),
                       fmt_num(ac.e_state.k), std::to_string(ac.e_state.n),
                       fmt_num(ac.e_state.dec),
                       terminated(ac.w_state) ? "1" : "0"});
  }
  return os.str();
}

inline int cmd_trace_search(const RunConfig& cfg, const std::vector<std::string>& tokens,
                            std::ostream& log = std::cout) {
  std::string csv = trace_search_csv(cfg, tokens);
  auto dir = detail::ensure_out_dir(cfg);
  detail::write_file(dir / "trace_search.csv", csv);
  log << csv;
  return kExitOk;
}

// Renders selected columns of any of our CSVs against an x column.
inline int cmd_plot(const std::string& csv_path, const std::string& x_col,
                    const std::vector<std::string>& columns, const std::string& out_svg,
                    const std::string& title) {
  std::ifstream f(csv_path);
  if (!f) throw ConfigError("cannot open csv: " + csv_path);
  CsvTable table = CsvTable::read(f);
  std::vector<double> xs = table.numeric_column(x_col);
  std::vector<ChartSeries> series;
  for (const std::string& c : columns) {
    ChartSeries s{c, xs, table.numeric_column(c)};
    series.push_back(std::move(s));
  }
  detail::write_file(out_svg, render_line_chart(title, x_col, series));
  return kExitOk;
}

}  // namespace planlab
