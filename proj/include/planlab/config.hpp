#pragma once
// Run configuration: flat key=value text with '#' comments. Unknown keys are
// errors so typos cannot silently fall back to defaults.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "planlab/adapt.hpp"
#include "planlab/distance.hpp"
#include "planlab/env.hpp"
#include "planlab/maps.hpp"
#include "planlab/rollout.hpp"

namespace planlab {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // World.
  std::string map = "default";  // builtin name ("default", "two_room") or a file path
  double cell_size = 1.0;
  double noise_std = 0.3;
  double max_step = 1.0;
  double goal_radius = 1.0;

  // Distance estimator.
  EstimatorSpec estimator;

  // Reactive controller surrogate.
  ReactionModel model;

  // Adaptation constants.
  double cth = 0.05;
  double w0 = 1.0, i_w = 3.0, d_w = 1.0;
  double e0 = 1.0, i_e = 1.0, d_e = 0.25;
  int n_phases = 3;
  double rho = 2.0, gamma = 0.9, tth = 0.1;
  int count = 4;
  SearchVariant variant = SearchVariant::Alg3;
  int max_iterations = 400;

  // Evaluation protocol.
  Protocol protocol{40, 5};
  bool replan = false;

  // Run plumbing.
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency
  std::string out_dir = "out";
  bool verbose = false;

  MazeWorld make_world() const {
    MazeWorld w;
    if (map == "default") {
      w = MazeWorld::from_text(maps::kDefault);
    } else if (map == "two_room") {
      w = MazeWorld::from_text(maps::kTwoRoom);
    } else {
      std::ifstream f(map);
      if (!f) throw ConfigError("cannot open map file: " + map);
      std::stringstream ss;
      ss << f.rdbuf();
      w = MazeWorld::from_text(ss.str());
    }
    w.cell_size = cell_size;
    w.noise_std = noise_std;
    w.max_step = max_step;
    w.goal_radius = goal_radius;
    return w;
  }

  DistanceEstimator make_estimator(const MazeWorld& world) const {
    return DistanceEstimator(world, estimator);
  }

  AdaptConfig make_adapt_config() const {
    AdaptConfig a;
    a.cth = cth;
    a.max_iterations = max_iterations;
    a.w_state = PatternSearchState{w0, i_w, d_w, 1.0, n_phases, rho, gamma, tth, count, 0, variant};
    a.e_state = PatternSearchState{e0, i_e, d_e, 1.0, n_phases, rho, gamma, tth, count, 0, variant};
    return a;
  }

  void validate() const {
    estimator.validate();
    if (noise_std < 0) throw ConfigError("noise_std must be >= 0");
    if (max_step <= 0) throw ConfigError("max_step must be > 0");
    if (goal_radius <= 0) throw ConfigError("goal_radius must be > 0");
    if (cell_size <= 0) throw ConfigError("cell_size must be > 0");
    if (model.step_scale <= 0 || model.step_scale > 1)
      throw ConfigError("step_scale must be in (0,1]");
    if (model.extra_noise_std < 0) throw ConfigError("extra_noise_std must be >= 0");
    if (model.budget_factor < 1) throw ConfigError("budget_factor must be >= 1");
    if (model.budget_floor < 1) throw ConfigError("budget_floor must be >= 1");
    if (cth <= 0 || cth >= 1) throw ConfigError("cth must be in (0,1)");
    if (w0 < 1) throw ConfigError("w0 must be >= 1");
    if (i_w <= 0 || i_e <= 0) throw ConfigError("increments must be > 0");
    if (d_w <= 0 || d_e <= 0) throw ConfigError("decrements must be > 0");
    if (n_phases < 0) throw ConfigError("n must be >= 0");
    if (rho < 1) throw ConfigError("rho must be >= 1");
    if (gamma <= 0 || gamma >= 1) throw ConfigError("gamma must be in (0,1)");
    if (tth <= 0) throw ConfigError("tth must be > 0");
    if (count < 1) throw ConfigError("count must be >= 1");
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (protocol.n_settings < 1) throw ConfigError("n_settings must be >= 1");
    if (protocol.tasks_per_setting < 1) throw ConfigError("tasks_per_setting must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
  }
};

namespace detail {

inline std::string trim(std::string s) {
  auto issp = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  std::size_t b = 0, e = s.size();
  while (b < e && issp(s[b])) ++b;
  while (e > b && issp(s[e - 1])) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (...) {
    throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long n = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(n);
  } catch (...) {
    throw ConfigError("bad integer value for " + key + ": '" + v + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return static_cast<std::uint64_t>(n);
  } catch (...) {
    throw ConfigError("bad unsigned value for " + key + ": '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean value for " + key + ": '" + v + "'");
}

inline EstimatorKind parse_kind(const std::string& v) {
  if (v == "oracle") return EstimatorKind::Oracle;
  if (v == "wall_piercing") return EstimatorKind::WallPiercing;
  if (v == "scaled") return EstimatorKind::Scaled;
  if (v == "noisy") return EstimatorKind::Noisy;
  if (v == "composite") return EstimatorKind::Composite;
  throw ConfigError("unknown estimator kind: '" + v + "'");
}

inline SearchVariant parse_variant(const std::string& v) {
  if (v == "alg2") return SearchVariant::Alg2;
  if (v == "alg3") return SearchVariant::Alg3;
  throw ConfigError("unknown search variant: '" + v + "'");
}

}  // namespace detail

inline RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  std::istringstream is{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto hashpos = line.find('#'); hashpos != std::string::npos)
      line = line.substr(0, hashpos);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string val = detail::trim(line.substr(eq + 1));

    if (key == "map") cfg.map = val;
    else if (key == "cell_size") cfg.cell_size = detail::parse_double(key, val);
    else if (key == "noise_std") cfg.noise_std = detail::parse_double(key, val);
    else if (key == "max_step") cfg.max_step = detail::parse_double(key, val);
    else if (key == "goal_radius") cfg.goal_radius = detail::parse_double(key, val);
    else if (key == "resolution") cfg.estimator.resolution = detail::parse_int(key, val);
    else if (key == "estimator") cfg.estimator.kind = detail::parse_kind(val);
    else if (key == "scale") cfg.estimator.scale = detail::parse_double(key, val);
    else if (key == "noise_rel_std") cfg.estimator.noise_rel_std = detail::parse_double(key, val);
    else if (key == "pierce_fraction") cfg.estimator.pierce_fraction = detail::parse_double(key, val);
    else if (key == "pierce_cap") cfg.estimator.pierce_cap = detail::parse_double(key, val);
    else if (key == "pierce_salt") cfg.estimator.pierce_salt = detail::parse_u64(key, val);
    else if (key == "step_scale") cfg.model.step_scale = detail::parse_double(key, val);
    else if (key == "extra_noise_std") cfg.model.extra_noise_std = detail::parse_double(key, val);
    else if (key == "budget_factor") cfg.model.budget_factor = detail::parse_double(key, val);
    else if (key == "budget_floor") cfg.model.budget_floor = detail::parse_int(key, val);
    else if (key == "cth") cfg.cth = detail::parse_double(key, val);
    else if (key == "w0") cfg.w0 = detail::parse_double(key, val);
    else if (key == "i_w") cfg.i_w = detail::parse_double(key, val);
    else if (key == "d_w") cfg.d_w = detail::parse_double(key, val);
    else if (key == "e0") cfg.e0 = detail::parse_double(key, val);
    else if (key == "i_e") cfg.i_e = detail::parse_double(key, val);
    else if (key == "d_e") cfg.d_e = detail::parse_double(key, val);
    else if (key == "n") cfg.n_phases = detail::parse_int(key, val);
    else if (key == "rho") cfg.rho = detail::parse_double(key, val);
    else if (key == "gamma") cfg.gamma = detail::parse_double(key, val);
    else if (key == "tth") cfg.tth = detail::parse_double(key, val);
    else if (key == "count") cfg.count = detail::parse_int(key, val);
    else if (key == "variant") cfg.variant = detail::parse_variant(val);
    else if (key == "max_iterations") cfg.max_iterations = detail::parse_int(key, val);
    else if (key == "n_settings") cfg.protocol.n_settings = detail::parse_int(key, val);
    else if (key == "tasks_per_setting") cfg.protocol.tasks_per_setting = detail::parse_int(key, val);
    else if (key == "replan") cfg.replan = detail::parse_bool(key, val);
    else if (key == "seed") cfg.seed = detail::parse_u64(key, val);
    else if (key == "threads") cfg.threads = detail::parse_int(key, val);
    else if (key == "out") cfg.out_dir = val;
    else if (key == "verbose") cfg.verbose = detail::parse_bool(key, val);
    else throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace planlab
