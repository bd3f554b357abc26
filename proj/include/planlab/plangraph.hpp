#pragma once
// Waypoint planning graph: sampled waypoints, edges under the strict cutoff e
// (symmetrized estimate must be < e), a cached all-pairs shortest-distance
// matrix, Dijkstra queries with start/goal attached as temporary nodes, and
// the O(w)-per-query next-waypoint scan backed by a one-shot goal field.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "planlab/distance.hpp"
#include "planlab/env.hpp"

namespace planlab {

struct PlanningGraph {
  struct Edge {
    int to;
    double len;
  };

  std::vector<Point> waypoints;
  double max_edge_length = 0.0;             // e; every edge length is < e
  std::vector<std::vector<Edge>> adj;       // symmetric
  std::vector<double> cache;                // w*w shortest path dists, kUnreachable apart

  int size() const { return static_cast<int>(waypoints.size()); }
  double cache_at(int i, int j) const {
    return cache[static_cast<std::size_t>(i) * waypoints.size() + j];
  }
  int edge_count() const {
    std::size_t n = 0;
    for (const auto& es : adj) n += es.size();
    return static_cast<int>(n / 2);
  }
};

namespace detail {

// Dijkstra over an adjacency list; ties pop the smaller node index.
inline std::vector<double> dijkstra(const std::vector<std::vector<PlanningGraph::Edge>>& adj,
                                    int source, std::vector<int>* pred = nullptr) {
  const std::size_t n = adj.size();
  std::vector<double> dist(n, kUnreachable);
  if (pred) pred->assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  dist[static_cast<std::size_t>(source)] = 0.0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& e : adj[static_cast<std::size_t>(u)]) {
      double nd = d + e.len;
      if (nd < dist[static_cast<std::size_t>(e.to)]) {
        dist[static_cast<std::size_t>(e.to)] = nd;
        if (pred) (*pred)[static_cast<std::size_t>(e.to)] = u;
        pq.push({nd, e.to});
      }
    }
  }
  return dist;
}

}  // namespace detail

// Builds the graph over explicit waypoints: undirected edge (u,v) iff the
// symmetrized estimate is strictly below e; cache filled by all-pairs
// Dijkstra over the resulting edge set. Candidate pairs are pruned by the
// estimator's euclidean lower bound when it has one, which keeps construction
// near-linear in w for the exact-oracle kinds.
inline PlanningGraph build_graph_from_waypoints(const DistanceEstimator& est,
                                                std::vector<Point> waypoints, double e,
                                                Rng& rng) {
  if (waypoints.empty()) throw std::invalid_argument("graph needs >= 1 waypoint");
  if (e <= 0.0) throw std::invalid_argument("max edge length must be > 0");
  PlanningGraph g;
  g.waypoints = std::move(waypoints);
  g.max_edge_length = e;
  const int n = g.size();
  g.adj.assign(static_cast<std::size_t>(n), {});

  auto try_edge = [&](int i, int j) {
    double d = est.sym_within(g.waypoints[static_cast<std::size_t>(i)],
                              g.waypoints[static_cast<std::size_t>(j)], e, rng);
    if (d < e) {
      g.adj[static_cast<std::size_t>(i)].push_back({j, d});
      g.adj[static_cast<std::size_t>(j)].push_back({i, d});
    }
  };

  std::optional<double> radius = est.euclid_edge_cutoff(e);
  if (!radius) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) try_edge(i, j);
  } else {
    // Bucket waypoints on a grid of the candidate radius; only neighbor
    // buckets can hold a partner. Pair order stays (i < j) row-major.
    const double cell = std::max(*radius, 1e-9);
    auto key = [&](Point p) {
      return std::pair<int, int>{static_cast<int>(std::floor(p.x / cell)),
                                 static_cast<int>(std::floor(p.y / cell))};
    };
    std::unordered_map<long long, std::vector<int>> buckets;
    auto pack = [](std::pair<int, int> k) {
      return (static_cast<long long>(k.first) << 32) ^ (k.second & 0xffffffffLL);
    };
    for (int i = 0; i < n; ++i)
      buckets[pack(key(g.waypoints[static_cast<std::size_t>(i)]))].push_back(i);
    for (int i = 0; i < n; ++i) {
      Point pi = g.waypoints[static_cast<std::size_t>(i)];
      auto [kx, ky] = key(pi);
      for (int by = ky - 1; by <= ky + 1; ++by)
        for (int bx = kx - 1; bx <= kx + 1; ++bx) {
          auto it = buckets.find(pack({bx, by}));
          if (it == buckets.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            if (distance(pi, g.waypoints[static_cast<std::size_t>(j)]) >= *radius) continue;
            try_edge(i, j);
          }
        }
    }
  }

  g.cache.assign(static_cast<std::size_t>(n) * n, kUnreachable);
  for (int i = 0; i < n; ++i) {
    auto dist = detail::dijkstra(g.adj, i);
    for (int j = 0; j < n; ++j)
      g.cache[static_cast<std::size_t>(i) * n + j] = dist[static_cast<std::size_t>(j)];
  }
  return g;
}

// Samples round(w) waypoints (floor 1) uniformly over free space. The search
// keeps w real-valued; rounding happens only here.
inline PlanningGraph build_graph(const MazeWorld& world, const DistanceEstimator& est,
                                 double w, double e, Rng& rng) {
  if (w < 1.0) throw std::invalid_argument("waypoint count must be >= 1");
  int n = std::max(1, static_cast<int>(std::llround(w)));
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(sample_free(world, rng));
  return build_graph_from_waypoints(est, std::move(pts), e, rng);
}

struct PlanResult {
  enum class Status { Found, NoPath };
  Status status = Status::NoPath;
  std::vector<Point> path;   // start ... goal inclusive when Found
  std::vector<int> nodes;    // parallel indices: -1 start, -2 goal, else waypoint
  double planned_length = kUnreachable;

  bool found() const { return status == Status::Found; }
  int interior_waypoints() const {
    return found() ? static_cast<int>(path.size()) - 2 : 0;
  }
};

namespace detail {

// Attachment edges from an off-graph point to every waypoint under the same
// strict cutoff rule. Query order is fixed for rng-stream stability.
inline std::vector<double> attach_edges(const PlanningGraph& g, const DistanceEstimator& est,
                                        Point p, double e, Rng& rng) {
  std::vector<double> out(static_cast<std::size_t>(g.size()), kUnreachable);
  for (int j = 0; j < g.size(); ++j)
    out[static_cast<std::size_t>(j)] =
        est.sym_within(p, g.waypoints[static_cast<std::size_t>(j)], e, rng);
  return out;
}

}  // namespace detail

// Dijkstra over the graph augmented with start and goal as temporary nodes
// (never inserted into the cache). Ties break toward smaller node index. The
// attach edges stay implicit; the graph adjacency is not copied.
inline PlanResult shortest_path(const PlanningGraph& g, const DistanceEstimator& est,
                                Point start, Point goal, double e, Rng& rng) {
  const int n = g.size();
  const int s_id = n, g_id = n + 1;
  double direct = est.sym_within(start, goal, e, rng);
  auto s_edges = detail::attach_edges(g, est, start, e, rng);
  auto g_edges = detail::attach_edges(g, est, goal, e, rng);

  std::vector<double> dist(static_cast<std::size_t>(n) + 2, kUnreachable);
  std::vector<int> pred(static_cast<std::size_t>(n) + 2, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  auto relax = [&](int from, int to, double len, double base) {
    double nd = base + len;
    if (nd < dist[static_cast<std::size_t>(to)]) {
      dist[static_cast<std::size_t>(to)] = nd;
      pred[static_cast<std::size_t>(to)] = from;
      pq.push({nd, to});
    }
  };
  dist[static_cast<std::size_t>(s_id)] = 0.0;
  pq.push({0.0, s_id});
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    if (u == g_id) break;
    if (u == s_id) {
      for (int j = 0; j < n; ++j)
        if (s_edges[static_cast<std::size_t>(j)] < e)
          relax(s_id, j, s_edges[static_cast<std::size_t>(j)], d);
      if (direct < e) relax(s_id, g_id, direct, d);
    } else {
      for (const auto& edge : g.adj[static_cast<std::size_t>(u)])
        relax(u, edge.to, edge.len, d);
      if (g_edges[static_cast<std::size_t>(u)] < e)
        relax(u, g_id, g_edges[static_cast<std::size_t>(u)], d);
    }
  }

  PlanResult res;
  if (is_unreachable(dist[static_cast<std::size_t>(g_id)])) return res;

  res.status = PlanResult::Status::Found;
  res.planned_length = dist[static_cast<std::size_t>(g_id)];
  std::vector<int> chain;
  for (int v = g_id; v != -1; v = pred[static_cast<std::size_t>(v)]) chain.push_back(v);
  std::reverse(chain.begin(), chain.end());
  for (int v : chain) {
    if (v == s_id) {
      res.nodes.push_back(-1);
      res.path.push_back(start);
    } else if (v == g_id) {
      res.nodes.push_back(-2);
      res.path.push_back(goal);
    } else {
      res.nodes.push_back(v);
      res.path.push_back(g.waypoints[static_cast<std::size_t>(v)]);
    }
  }
  return res;
}

// Graph distance from every waypoint to one goal (goal attached under the
// cutoff rule). Computed once per task; each next_waypoint call is then a
// single O(w) scan.
struct GoalField {
  Point goal;
  double e = 0.0;
  std::vector<double> to_goal;  // per waypoint, kUnreachable when disconnected
};

inline GoalField attach_goal(const PlanningGraph& g, const DistanceEstimator& est,
                             Point goal, double e, Rng& rng) {
  const int n = g.size();
  auto g_edges = detail::attach_edges(g, est, goal, e, rng);
  std::vector<double> dist(static_cast<std::size_t>(n), kUnreachable);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int j = 0; j < n; ++j) {
    if (g_edges[static_cast<std::size_t>(j)] < e) {
      dist[static_cast<std::size_t>(j)] = g_edges[static_cast<std::size_t>(j)];
      pq.push({dist[static_cast<std::size_t>(j)], j});
    }
  }
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    for (const auto& edge : g.adj[static_cast<std::size_t>(u)]) {
      double nd = d + edge.len;
      if (nd < dist[static_cast<std::size_t>(edge.to)]) {
        dist[static_cast<std::size_t>(edge.to)] = nd;
        pq.push({nd, edge.to});
      }
    }
  }
  GoalField gf;
  gf.goal = goal;
  gf.e = e;
  gf.to_goal = std::move(dist);
  return gf;
}

// Best next subgoal from s: the goal itself when directly attachable, else
// argmin over attachable waypoints of est(s,u) + cached distance to goal.
// Ties take the smaller waypoint index.
inline std::optional<Point> next_waypoint(const PlanningGraph& g, const GoalField& gf,
                                          const DistanceEstimator& est, Point s,
                                          double e, Rng& rng) {
  if (est.sym_within(s, gf.goal, e, rng) < e) return gf.goal;
  int best = -1;
  double best_cost = kUnreachable;
  for (int u = 0; u < g.size(); ++u) {
    double du = est.sym_within(s, g.waypoints[static_cast<std::size_t>(u)], e, rng);
    if (!(du < e)) continue;
    double tail = gf.to_goal[static_cast<std::size_t>(u)];
    if (is_unreachable(tail)) continue;
    double c = du + tail;
    if (c < best_cost) {
      best_cost = c;
      best = u;
    }
  }
  if (best < 0) return std::nullopt;
  return g.waypoints[static_cast<std::size_t>(best)];
}

// CSV dump: waypoint rows then edge rows (deduplicated, i < j).
inline void dump_graph_csv(const PlanningGraph& g, std::ostream& os) {
  os << "kind,a,b,x1,y1,x2,y2,len\n";
  char buf[160];
  for (int i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof buf, "waypoint,%d,,%.10g,%.10g,,,\n", i,
                  g.waypoints[static_cast<std::size_t>(i)].x,
                  g.waypoints[static_cast<std::size_t>(i)].y);
    os << buf;
  }
  for (int i = 0; i < g.size(); ++i) {
    for (const auto& edge : g.adj[static_cast<std::size_t>(i)]) {
      if (edge.to <= i) continue;
      std::snprintf(buf, sizeof buf, "edge,%d,%d,%.10g,%.10g,%.10g,%.10g,%.10g\n", i,
                    edge.to, g.waypoints[static_cast<std::size_t>(i)].x,
                    g.waypoints[static_cast<std::size_t>(i)].y,
                    g.waypoints[static_cast<std::size_t>(edge.to)].x,
                    g.waypoints[static_cast<std::size_t>(edge.to)].y, edge.len);
      os << buf;
    }
  }
}

}  // namespace planlab
