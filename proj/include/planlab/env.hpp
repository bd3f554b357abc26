#pragma once
// Continuous 2D maze world: ASCII-loaded occupancy grid, noisy point motion
// truncated at walls, uniform free-space sampling, and the greedy reactive
// controller that stands in for a learned low-level policy.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "planlab/rng.hpp"

namespace planlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};
using Point = Vec2;

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point a, Point b) { return norm(b - a); }

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Occupancy geometry plus the motion-noise parameters. Immutable after load;
// shared read-only across concurrent rollouts.
class MazeWorld {
 public:
  double cell_size = 1.0;
  double noise_std = 0.3;    // per-step, per-axis displacement noise
  double max_step = 1.0;     // maximum action magnitude
  double goal_radius = 1.0;  // success / subgoal-arrival distance
  double contact_eps = 1e-3; // stop distance short of a wall contact

  static MazeWorld from_text(std::string_view text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
      if (ch == '\n') {
        lines.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    if (!cur.empty()) lines.push_back(cur);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() < 3) throw MapError("map needs at least 3 rows");

    MazeWorld w;
    w.h_ = static_cast<int>(lines.size());
    w.w_ = static_cast<int>(lines.front().size());
    if (w.w_ < 3) throw MapError("map needs at least 3 columns");
    w.walls_.assign(static_cast<std::size_t>(w.w_) * w.h_, 0);

    int free_count = 0;
    for (int r = 0; r < w.h_; ++r) {
      const std::string& line = lines[static_cast<std::size_t>(r)];
      if (static_cast<int>(line.size()) != w.w_)
        throw MapError("ragged map line " + std::to_string(r));
      for (int c = 0; c < w.w_; ++c) {
        char ch = line[static_cast<std::size_t>(c)];
        if (ch != '#' && ch != '.')
          throw MapError(std::string("illegal map character '") + ch + "'");
        bool wall = (ch == '#');
        bool border = (r == 0 || c == 0 || r == w.h_ - 1 || c == w.w_ - 1);
        if (border && !wall) throw MapError("map border must be walls");
        w.walls_[static_cast<std::size_t>(r) * w.w_ + c] = wall ? 1 : 0;
        if (!wall) ++free_count;
      }
    }
    if (free_count == 0) throw MapError("map has no free cell");
    return w;
  }

  int width() const { return w_; }
  int height() const { return h_; }
  double width_units() const { return w_ * cell_size; }
  double height_units() const { return h_ * cell_size; }
  double diameter() const { return std::hypot(width_units(), height_units()); }

  // Out-of-range counts as wall.
  bool wall(int cx, int cy) const {
    if (cx < 0 || cy < 0 || cx >= w_ || cy >= h_) return true;
    return walls_[static_cast<std::size_t>(cy) * w_ + cx] != 0;
  }

  // Cell assignment is floor(coordinate / cell_size); points exactly on a
  // boundary belong to the higher-index cell.
  bool is_free(Point p) const {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    int cx = static_cast<int>(std::floor(p.x / cell_size));
    int cy = static_cast<int>(std::floor(p.y / cell_size));
    return !wall(cx, cy);
  }

  int free_cells() const {
    int n = 0;
    for (std::uint8_t v : walls_) n += (v == 0);
    return n;
  }

  // Generous episode cap; prevents infinite wandering.
  int default_max_steps() const {
    return static_cast<int>(std::ceil(50.0 * diameter() / max_step));
  }

 private:
  int w_ = 0, h_ = 0;
  std::vector<std::uint8_t> walls_;
};

inline MazeWorld load_maze(std::string_view text) { return MazeWorld::from_text(text); }

// Moves from s toward candidate, stopping contact_eps short of the first wall
// crossing. Cells are tested at interval midpoints of the segment's grid
// crossings, which keeps boundary cases deterministic.
inline Point truncate_motion(const MazeWorld& w, Point s, Point candidate) {
  const double cs = w.cell_size;
  Vec2 d = candidate - s;
  double len = norm(d);
  if (len == 0.0) return s;

  std::vector<double> ts;
  ts.reserve(32);
  auto add_axis = [&](double s0, double c0, double da) {
    if (da == 0.0) return;
    int k0 = static_cast<int>(std::floor(s0 / cs));
    int k1 = static_cast<int>(std::floor(c0 / cs));
    int lo = std::min(k0, k1) + 1, hi = std::max(k0, k1);
    for (int k = lo; k <= hi; ++k) {
      double t = (k * cs - s0) / da;
      if (t > 0.0 && t <= 1.0) ts.push_back(t);
    }
  };
  add_axis(s.x, candidate.x, d.x);
  add_axis(s.y, candidate.y, d.y);
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());

  double prev = 0.0;
  for (double t : ts) {
    if (t <= prev + 1e-12) { prev = std::max(prev, t); continue; }
    Point mid = s + d * (0.5 * (prev + t));
    if (!w.is_free(mid)) {
      double travel = std::max(0.0, prev * len - w.contact_eps);
      return s + d * (travel / len);
    }
    prev = t;
  }
  return candidate;
}

// One environment transition: apply the action (|action| <= max_step), add
// per-axis Gaussian noise, truncate at the first wall contact. Never returns
// a wall position.
inline Point step(const MazeWorld& w, Point s, Vec2 action, Rng& rng) {
  assert(norm(action) <= w.max_step * (1.0 + 1e-9));
  Point candidate{s.x + action.x + rng.normal(0.0, w.noise_std),
                  s.y + action.y + rng.normal(0.0, w.noise_std)};
  return truncate_motion(w, s, candidate);
}

// Surrogate reactive controller. step_scale and extra_noise_std set how
// capable it is; budget_factor/budget_floor set how long a rollout waits for
// it before declaring a subgoal unreachable.
struct ReactionModel {
  double step_scale = 1.0;      // fraction of max_step commanded, (0,1]
  double extra_noise_std = 0.0; // controller jitter per axis
  double budget_factor = 3.0;   // steps per subgoal = ceil(factor * est dist)
  int budget_floor = 10;        // minimum steps per subgoal
};

// Greedy: heads straight for the subgoal, never routes around walls.
inline Vec2 react(const ReactionModel& m, const MazeWorld& w, Point s, Point subgoal,
                  Rng& rng) {
  Vec2 to = subgoal - s;
  double d = norm(to);
  double mag = std::min(m.step_scale * w.max_step, d);
  Vec2 v = d > 0.0 ? to * (mag / d) : Vec2{};
  v.x += rng.normal(0.0, m.extra_noise_std);
  v.y += rng.normal(0.0, m.extra_noise_std);
  double n = norm(v);
  if (n > w.max_step) v = v * (w.max_step / n);
  return v;
}

// Uniform over the free area by rejection.
inline Point sample_free(const MazeWorld& w, Rng& rng) {
  for (int i = 0; i < 10000; ++i) {
    Point p{rng.uniform(0.0, w.width_units()), rng.uniform(0.0, w.height_units())};
    if (w.is_free(p)) return p;
  }
  throw std::runtime_error("sample_free: rejection limit hit (degenerate map?)");
}

}  // namespace planlab
