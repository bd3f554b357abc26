#pragma once
// Task sampling, episode execution along planned waypoints, and aggregation of
// the three outcomes (Success / CannotReach / NoPath) over an evaluation
// batch: n_settings independently sampled graphs, tasks_per_setting fresh
// tasks each. Settings run in parallel; every episode derives its rng stream
// from (master seed, setting, task), so results do not depend on scheduling.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "planlab/distance.hpp"
#include "planlab/env.hpp"
#include "planlab/plangraph.hpp"
#include "planlab/rng.hpp"

namespace planlab {

struct TaskSpec {
  Point start;
  Point goal;
  int max_total_steps = 0;
};

enum class OutcomeTag { Success, CannotReach, NoPath };

inline const char* to_string(OutcomeTag t) {
  switch (t) {
    case OutcomeTag::Success: return "success";
    case OutcomeTag::CannotReach: return "cannot_reach";
    case OutcomeTag::NoPath: return "no_path";
  }
  return "?";
}

struct Outcome {
  OutcomeTag tag = OutcomeTag::NoPath;
  int steps_taken = 0;
  int path_waypoints = 0;        // interior waypoints on the planned path
  std::uint64_t queries = 0;     // estimator evaluations spent during the task
};

struct RolloutStats {
  double rate_success = 0.0;
  double rate_cannot_reach = 0.0;
  double rate_no_path = 0.0;
  std::optional<double> avg_task_time;  // mean steps over successes only
  std::optional<double> avg_queries;    // mean estimator evaluations over successes
  long episodes = 0;
};

struct Protocol {
  int n_settings = 40;
  int tasks_per_setting = 5;
};

struct RolloutOptions {
  bool replan = false;   // re-pick the next waypoint every step instead of
                         // following one fixed path
  int threads = 1;       // 0 = hardware concurrency
  std::ostream* episode_log = nullptr;  // CSV lines: setting,task,tag,steps,path_waypoints
};

// Rejects start == goal and oracle-unreachable pairs, so NoPath always means
// graph sparsity rather than environment impossibility.
inline TaskSpec sample_task(const MazeWorld& world, const DistanceEstimator& est,
                            Rng& rng) {
  for (int i = 0; i < 10000; ++i) {
    Point s = sample_free(world, rng);
    Point g = sample_free(world, rng);
    if (s == g) continue;
    if (!est.reachable(s, g)) continue;
    return {s, g, world.default_max_steps()};
  }
  throw std::runtime_error("sample_task: rejection limit hit");
}

namespace detail {

// Drive toward one subgoal until within goal_radius; false when the step
// budget runs out or the episode step cap is hit.
inline bool drive_leg(const MazeWorld& world, const ReactionModel& model, Point& pos,
                      Point subgoal, int budget, int max_total_steps, int& steps,
                      Rng& rng) {
  while (true) {
    if (distance(pos, subgoal) <= world.goal_radius) return true;
    if (budget-- <= 0 || steps >= max_total_steps) return false;
    Vec2 a = react(model, world, pos, subgoal, rng);
    pos = step(world, pos, a, rng);
    ++steps;
  }
}

inline int leg_budget(const ReactionModel& model, double est_dist) {
  double b = std::ceil(model.budget_factor * est_dist);
  double cap = 1e9;
  return static_cast<int>(std::max(static_cast<double>(model.budget_floor),
                                   std::min(b, cap)));
}

}  // namespace detail

// One episode. Plans with the same estimator the graph was built with, then
// follows the waypoints in order (or replans every step when replan is set).
inline Outcome run_task(const MazeWorld& world, const ReactionModel& model,
                        const DistanceEstimator& est, const PlanningGraph& graph,
                        const TaskSpec& task, double e, Rng& rng, bool replan = false) {
  const std::uint64_t q0 = est.query_count();
  Outcome out;
  int steps = 0;
  Point pos = task.start;

  if (!replan) {
    PlanResult plan = shortest_path(graph, est, task.start, task.goal, e, rng);
    if (!plan.found()) {
      out.tag = OutcomeTag::NoPath;
      out.queries = est.query_count() - q0;
      return out;
    }
    out.path_waypoints = plan.interior_waypoints();
    out.tag = OutcomeTag::Success;
    for (std::size_t i = 1; i < plan.path.size(); ++i) {
      Point sub = plan.path[i];
      int budget = detail::leg_budget(model, est.sym(pos, sub, rng));
      if (!detail::drive_leg(world, model, pos, sub, budget, task.max_total_steps,
                             steps, rng)) {
        out.tag = OutcomeTag::CannotReach;
        break;
      }
    }
  } else {
    GoalField gf = attach_goal(graph, est, task.goal, e, rng);
    auto sub0 = next_waypoint(graph, gf, est, pos, e, rng);
    if (!sub0) {
      out.tag = OutcomeTag::NoPath;
      out.queries = est.query_count() - q0;
      return out;
    }
    out.tag = OutcomeTag::CannotReach;
    while (steps < task.max_total_steps) {
      if (distance(pos, task.goal) <= world.goal_radius) {
        out.tag = OutcomeTag::Success;
        break;
      }
      auto sub = next_waypoint(graph, gf, est, pos, e, rng);
      if (!sub) break;  // drifted out of reach of the graph
      Vec2 a = react(model, world, pos, *sub, rng);
      pos = step(world, pos, a, rng);
      ++steps;
    }
    if (out.tag != OutcomeTag::Success &&
        distance(pos, task.goal) <= world.goal_radius)
      out.tag = OutcomeTag::Success;
  }

  out.steps_taken = steps;
  out.queries = est.query_count() - q0;
  return out;
}

// The evaluation batch behind every adaptation iteration and sweep point.
inline RolloutStats evaluate(const MazeWorld& world, const ReactionModel& model,
                             const DistanceEstimator& est, double w, double e,
                             Protocol protocol, std::uint64_t master_seed,
                             const RolloutOptions& options = {}) {
  if (protocol.n_settings < 1 || protocol.tasks_per_setting < 1)
    throw std::invalid_argument("protocol needs n_settings >= 1 and tasks >= 1");

  const int S = protocol.n_settings, T = protocol.tasks_per_setting;
  std::vector<Outcome> outcomes(static_cast<std::size_t>(S) * T);

  auto run_setting = [&](int s) {
    DistanceEstimator local = est.fresh_clone();
    Rng graph_rng = Rng::stream(master_seed, {0xA11CEull, static_cast<std::uint64_t>(s)});
    PlanningGraph graph = build_graph(world, local, w, e, graph_rng);
    for (int t = 0; t < T; ++t) {
      Rng task_rng = Rng::stream(master_seed, {0x7A5Cull, static_cast<std::uint64_t>(s),
                                               static_cast<std::uint64_t>(t)});
      TaskSpec task = sample_task(world, local, task_rng);
      outcomes[static_cast<std::size_t>(s) * T + t] =
          run_task(world, model, local, graph, task, e, task_rng, options.replan);
    }
  };

  int threads = options.threads;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, S));

  if (threads == 1) {
    for (int s = 0; s < S; ++s) run_setting(s);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    pool.reserve(static_cast<std::size_t>(threads));
    for (int tid = 0; tid < threads; ++tid)
      pool.emplace_back([&, tid] {
        try {
          for (int s = tid; s < S; s += threads) run_setting(s);
        } catch (...) {
          errors[static_cast<std::size_t>(tid)] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& err : errors)
      if (err) std::rethrow_exception(err);
  }

  if (options.episode_log) {
    for (int s = 0; s < S; ++s)
      for (int t = 0; t < T; ++t) {
        const Outcome& o = outcomes[static_cast<std::size_t>(s) * T + t];
        (*options.episode_log) << s << ',' << t << ',' << to_string(o.tag) << ','
                               << o.steps_taken << ',' << o.path_waypoints << '\n';
      }
  }

  long n_success = 0, n_cannot = 0, n_nopath = 0;
  long long steps_sum = 0;
  unsigned long long query_sum = 0;
  for (const Outcome& o : outcomes) {
    switch (o.tag) {
      case OutcomeTag::Success:
        ++n_success;
        steps_sum += o.steps_taken;
        query_sum += o.queries;
        break;
      case OutcomeTag::CannotReach: ++n_cannot; break;
      case OutcomeTag::NoPath: ++n_nopath; break;
    }
  }
  RolloutStats stats;
  stats.episodes = static_cast<long>(outcomes.size());
  stats.rate_success = static_cast<double>(n_success) / stats.episodes;
  stats.rate_cannot_reach = static_cast<double>(n_cannot) / stats.episodes;
  stats.rate_no_path = static_cast<double>(n_nopath) / stats.episodes;
  if (n_success > 0) {
    stats.avg_task_time = static_cast<double>(steps_sum) / n_success;
    stats.avg_queries = static_cast<double>(query_sum) / n_success;
  }
  return stats;
}

}  // namespace planlab
