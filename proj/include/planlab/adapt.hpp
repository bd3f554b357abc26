#pragma once
// Outcome-driven parameter adaptation. One update step picks exactly one
// action from the outcome frequencies (cannot-reach first, then no-path, then
// the success case), and each planning parameter carries its own pattern
// search state: asymmetric exponential increases against decaying decreases,
// terminated when the decrement falls below tth. Two state machines are
// provided; the windowed variant keeps exponential growth alive across
// isolated spurious successes.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "planlab/rollout.hpp"

namespace planlab {

enum class SearchVariant { Alg2, Alg3 };

inline const char* to_string(SearchVariant v) {
  return v == SearchVariant::Alg2 ? "alg2" : "alg3";
}

// One parameter's search status. Defaults are the standard waypoint-count
// setting: i=3, d=1, n=3, rho=2, gamma=0.9, tth=0.1, count=4.
struct PatternSearchState {
  double value = 1.0;
  double inc = 3.0;        // i: base increment
  double dec = 1.0;        // d: current decrement
  double k = 1.0;          // current increment multiplier
  int n = 3;               // remaining exponential phases
  double rho = 2.0;        // growth factor of the multiplier
  double gamma = 0.9;      // reduction factor of the decrement
  double tth = 0.1;        // termination threshold on dec
  int count_reset = 4;     // Alg3 only: exponential search interval
  int c = 0;               // Alg3 only: countdown since the last increase
  SearchVariant variant = SearchVariant::Alg2;
};

inline bool terminated(const PatternSearchState& st) { return st.dec < st.tth; }

namespace detail {
inline void clamp_floor(PatternSearchState& st) { st.value = std::max(1.0, st.value); }
}

inline void ps_increase(PatternSearchState& st) {
  if (st.variant == SearchVariant::Alg2) {
    st.value += st.k * st.inc;
    if (st.n > 0)
      st.k *= st.rho;
    else
      st.dec *= st.gamma;
  } else {
    if (st.c > 0)
      st.k *= st.rho;
    else
      st.k = 1.0;
    if (st.n == 0) st.dec *= st.gamma;
    st.value += st.k * st.inc;
    st.c = st.count_reset;
  }
  detail::clamp_floor(st);
}

inline void ps_decrease(PatternSearchState& st) {
  if (st.variant == SearchVariant::Alg2) {
    if (st.n > 1) {
      --st.n;
      st.value -= (st.k / st.rho) * st.inc;
      st.k = 1.0;
    } else if (st.n == 1) {
      st.n = 0;
      st.value -= st.dec;
      st.k = 1.0;
    } else {
      st.value -= st.dec;
    }
  } else {
    if (st.n > 0 && st.c == 1) {
      --st.n;
      st.value -= st.k * st.inc;
    } else {
      st.value -= st.dec;
    }
    if (st.c > 0) --st.c;
  }
  detail::clamp_floor(st);
}

enum class AdaptAction { DecreaseE, IncreaseBoth, DecreaseW };

inline const char* to_string(AdaptAction a) {
  switch (a) {
    case AdaptAction::DecreaseE: return "decrease_e";
    case AdaptAction::IncreaseBoth: return "increase_both";
    case AdaptAction::DecreaseW: return "decrease_w";
  }
  return "?";
}

struct AdaptConfig {
  double cth = 0.05;  // change threshold on outcome frequencies
  PatternSearchState w_state;
  PatternSearchState e_state;
  int max_iterations = 400;
};

// Branch order is fixed: cannot-reach, then no-path, then the no-problem case.
inline AdaptAction classify(const RolloutStats& stats, double cth) {
  if (stats.rate_cannot_reach > cth) return AdaptAction::DecreaseE;
  if (stats.rate_no_path > cth) return AdaptAction::IncreaseBoth;
  return AdaptAction::DecreaseW;
}

inline void apply_action(AdaptAction action, AdaptConfig& cfg) {
  switch (action) {
    case AdaptAction::DecreaseE:
      ps_decrease(cfg.e_state);
      break;
    case AdaptAction::IncreaseBoth:
      ps_increase(cfg.w_state);
      ps_increase(cfg.e_state);
      break;
    case AdaptAction::DecreaseW:
      ps_decrease(cfg.w_state);
      break;
  }
}

inline AdaptAction update_once(const RolloutStats& stats, AdaptConfig& cfg) {
  AdaptAction action = classify(stats, cfg.cth);
  apply_action(action, cfg);
  return action;
}

// Predicted converged success rate, and its simplification for i >> tth, cth.
inline double predict_sr(double i, double cth, double tth) {
  if (i <= 0.0 || tth <= 0.0) throw std::invalid_argument("predict_sr: i, tth must be > 0");
  if (cth <= 0.0 || cth >= 1.0) throw std::invalid_argument("predict_sr: cth in (0,1)");
  return 1.0 - (i * cth / 2.0 + tth * cth) / (i + tth);
}

inline double predict_sr_simplified(double cth) { return 1.0 - cth / 2.0; }

struct AdaptRecord {
  int iteration = 0;
  double w = 0.0, e = 0.0;  // parameters the iteration was evaluated at
  RolloutStats stats;
  AdaptAction action = AdaptAction::DecreaseW;
  // Post-update search status.
  double d_w = 0.0, k_w = 0.0;
  int n_w = 0;
  double d_e = 0.0;
};

struct AdaptTrace {
  std::vector<AdaptRecord> rows;
  bool terminated_normally = false;  // w search hit d < tth before the cap
};

// The inner evaluation: usually a simulator batch, a script in tests.
using Evaluator = std::function<RolloutStats(double w, double e, int iteration)>;
using IterationObserver = std::function<void(const AdaptRecord&)>;

// Evaluate -> pick action -> move the named state(s), until the w search
// terminates or the iteration cap is reached.
inline AdaptTrace run_adaptation(const Evaluator& evaluate_at, AdaptConfig cfg,
                                 const IterationObserver& observe = {}) {
  AdaptTrace trace;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (terminated(cfg.w_state)) {
      trace.terminated_normally = true;
      break;
    }
    AdaptRecord rec;
    rec.iteration = it;
    rec.w = cfg.w_state.value;
    rec.e = cfg.e_state.value;
    rec.stats = evaluate_at(rec.w, rec.e, it);
    rec.action = update_once(rec.stats, cfg);
    rec.d_w = cfg.w_state.dec;
    rec.k_w = cfg.w_state.k;
    rec.n_w = cfg.w_state.n;
    rec.d_e = cfg.e_state.dec;
    trace.rows.push_back(rec);
    if (observe) observe(rec);
  }
  if (terminated(cfg.w_state)) trace.terminated_normally = true;
  return trace;
}

// Binds the simulator into an Evaluator; each iteration gets its own seed
// stream derived from the master seed.
inline Evaluator make_sim_evaluator(const MazeWorld& world, const ReactionModel& model,
                                    const DistanceEstimator& est, Protocol protocol,
                                    std::uint64_t master_seed,
                                    RolloutOptions options = {}) {
  return [&world, &model, &est, protocol, master_seed, options](
             double w, double e, int iteration) {
    std::uint64_t seed = hash_mix(master_seed, 0xEBA1ull + static_cast<std::uint64_t>(iteration));
    return evaluate(world, model, est, w, e, protocol, seed, options);
  };
}

// Scripted outcome stream: each token fixes the whole batch's outcome.
// Tokens: "S", "CR", "NP".
inline Evaluator make_scripted_evaluator(std::vector<std::string> tokens) {
  for (const auto& t : tokens)
    if (t != "S" && t != "CR" && t != "NP")
      throw std::invalid_argument("unknown outcome token '" + t + "'");
  return [tokens = std::move(tokens)](double, double, int iteration) {
    RolloutStats s;
    s.episodes = 1;
    const std::string& t = tokens[static_cast<std::size_t>(iteration) % tokens.size()];
    if (t == "S") {
      s.rate_success = 1.0;
      s.avg_task_time = 0.0;
      s.avg_queries = 0.0;
    } else if (t == "CR") {
      s.rate_cannot_reach = 1.0;
    } else {
      s.rate_no_path = 1.0;
    }
    return s;
  };
}

}  // namespace planlab
