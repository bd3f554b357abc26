#pragma once
// Shortest-path distance machinery. The ground-truth oracle is an 8-connected
// Dijkstra over a subdivided occupancy grid (no corner cutting, diagonal cost
// sqrt(2) * grid step). Fields expand lazily up to the largest cutoff queried,
// which keeps graph construction near O(area within the edge cutoff) per
// waypoint instead of O(map) per waypoint.
//
// Distances are tracked as exact (straight, diagonal) move counts, so a
// distance is bit-identical no matter which endpoint the field was grown from.
//
// On top of the oracle sit the corrupted estimator kinds that reproduce the
// failure modes of learned distance estimates: uniform scaling, relative
// noise, and wall piercing (a stable subset of separated pairs reports the
// straight-line distance instead of the true one).

#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "planlab/env.hpp"
#include "planlab/rng.hpp"

namespace planlab {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();
inline bool is_unreachable(double d) { return std::isinf(d); }
inline constexpr double kSqrt2 = 1.4142135623730950488016887242097;

// Occupancy and connectivity at oracle resolution. Immutable once built.
class SubcellMap {
 public:
  SubcellMap(const MazeWorld& world, int resolution)
      : res_(resolution),
        nx_(world.width() * resolution),
        ny_(world.height() * resolution),
        step_(world.cell_size / resolution) {
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    free_.assign(static_cast<std::size_t>(nx_) * ny_, 0);
    for (int y = 0; y < ny_; ++y)
      for (int x = 0; x < nx_; ++x)
        free_[idx(x, y)] = world.wall(x / res_, y / res_) ? 0 : 1;
    label_components();
    build_neighbor_masks();
  }

  int resolution() const { return res_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double grid_step() const { return step_; }
  std::size_t size() const { return free_.size(); }

  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * nx_ + x;
  }

  // -1 when outside the grid.
  int index_of(Point p) const {
    int x = static_cast<int>(std::floor(p.x / step_));
    int y = static_cast<int>(std::floor(p.y / step_));
    if (x < 0 || y < 0 || x >= nx_ || y >= ny_) return -1;
    return static_cast<int>(idx(x, y));
  }

  bool free_at(int i) const { return i >= 0 && free_[static_cast<std::size_t>(i)] != 0; }
  int component(int i) const { return i < 0 ? -1 : comp_[static_cast<std::size_t>(i)]; }

  Point center(int i) const {
    int x = i % nx_, y = i / nx_;
    return {(x + 0.5) * step_, (y + 0.5) * step_};
  }

  int count_free() const {
    int n = 0;
    for (std::uint8_t f : free_) n += f;
    return n;
  }

  // Allowed moves from a cell, one bit per direction in the order of
  // kNeighborSteps. Diagonals require both flanking orthogonals free.
  std::uint8_t moves(int i) const { return moves_[static_cast<std::size_t>(i)]; }

  struct NeighborStep {
    int dx, dy;
    bool diagonal;
  };
  static constexpr NeighborStep kNeighborSteps[8] = {
      {1, 0, false}, {-1, 0, false}, {0, 1, false},  {0, -1, false},
      {1, 1, true},  {1, -1, true},  {-1, 1, true},  {-1, -1, true},
  };

  int step_offset(int k) const {
    return kNeighborSteps[k].dx + kNeighborSteps[k].dy * nx_;
  }

 private:
  void build_neighbor_masks() {
    moves_.assign(free_.size(), 0);
    auto ok = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < nx_ && y < ny_ && free_[idx(x, y)];
    };
    for (int y = 0; y < ny_; ++y)
      for (int x = 0; x < nx_; ++x) {
        if (!free_[idx(x, y)]) continue;
        std::uint8_t m = 0;
        for (int k = 0; k < 8; ++k) {
          const NeighborStep& s = kNeighborSteps[k];
          if (!ok(x + s.dx, y + s.dy)) continue;
          if (s.diagonal && (!ok(x + s.dx, y) || !ok(x, y + s.dy))) continue;
          m |= static_cast<std::uint8_t>(1u << k);
        }
        moves_[idx(x, y)] = m;
      }
  }

  void label_components() {
    comp_.assign(free_.size(), -1);
    std::vector<int> stack;
    int next = 0;
    for (std::size_t s = 0; s < free_.size(); ++s) {
      if (!free_[s] || comp_[s] >= 0) continue;
      int id = next++;
      comp_[s] = id;
      stack.push_back(static_cast<int>(s));
      while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        int x = i % nx_, y = i / nx_;
        const int dx[4] = {1, -1, 0, 0}, dy[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int xx = x + dx[k], yy = y + dy[k];
          if (xx < 0 || yy < 0 || xx >= nx_ || yy >= ny_) continue;
          std::size_t j = idx(xx, yy);
          if (free_[j] && comp_[j] < 0) {
            comp_[j] = id;
            stack.push_back(static_cast<int>(j));
          }
        }
      }
    }
  }

  int res_, nx_, ny_;
  double step_;
  std::vector<std::uint8_t> free_;
  std::vector<std::uint8_t> moves_;
  std::vector<std::int32_t> comp_;
};

// One Dijkstra field, grown on demand. Distances are exact lattice values
// (straight + diagonal move counts), converted to length units on read.
class DistanceField {
 public:
  DistanceField(std::shared_ptr<const SubcellMap> topo, int source)
      : topo_(std::move(topo)), source_(source) {
    straight_.assign(topo_->size(), kNoDist);
    diag_.assign(topo_->size(), kNoDist);
    done_.assign(topo_->size(), 0);
    straight_[static_cast<std::size_t>(source_)] = 0;
    diag_[static_cast<std::size_t>(source_)] = 0;
    open_.push({0.0, source_});
  }

  int source() const { return source_; }

  // Exact distance when it is < cutoff; kUnreachable otherwise ("at least
  // cutoff, or disconnected" -- callers separate the two via components).
  double query(int target, double cutoff) {
    if (!topo_->free_at(target)) return kUnreachable;
    auto t = static_cast<std::size_t>(target);
    while (!open_.empty()) {
      Item top = open_.top();
      if (done_[static_cast<std::size_t>(top.i)]) { open_.pop(); continue; }
      if (done_[t] && value_at(t) <= top.key) break;
      if (top.key >= cutoff) break;
      open_.pop();
      settle(top.i);
    }
    if (done_[t]) {
      double v = value_at(t);
      if (v < cutoff) return v;
    }
    return kUnreachable;
  }

  // Settle every reachable subcell.
  void complete() {
    while (!open_.empty()) {
      Item top = open_.top();
      open_.pop();
      if (done_[static_cast<std::size_t>(top.i)]) continue;
      settle(top.i);
    }
  }

  bool settled(int i) const { return done_[static_cast<std::size_t>(i)] != 0; }
  double settled_value(int i) const { return value_at(static_cast<std::size_t>(i)); }

 private:
  static constexpr std::uint16_t kNoDist = 0xFFFF;

  struct Item {
    double key;
    int i;
    bool operator>(const Item& o) const {
      return key > o.key || (key == o.key && i > o.i);
    }
  };

  double value_at(std::size_t i) const {
    return (straight_[i] + diag_[i] * kSqrt2) * topo_->grid_step();
  }

  void settle(int i) {
    auto u = static_cast<std::size_t>(i);
    done_[u] = 1;
    const std::uint16_t s0 = straight_[u], d0 = diag_[u];
    const std::uint8_t m = topo_->moves(i);
    for (int k = 0; k < 8; ++k) {
      if (!(m & (1u << k))) continue;
      const bool diagonal = SubcellMap::kNeighborSteps[k].diagonal;
      auto v = static_cast<std::size_t>(i + topo_->step_offset(k));
      if (done_[v]) continue;
      std::uint16_t s1 = static_cast<std::uint16_t>(s0 + !diagonal);
      std::uint16_t d1 = static_cast<std::uint16_t>(d0 + diagonal);
      double nd = s1 + d1 * kSqrt2;
      double cur = (straight_[v] == kNoDist)
                       ? std::numeric_limits<double>::infinity()
                       : (straight_[v] + diag_[v] * kSqrt2);
      if (nd < cur) {
        straight_[v] = s1;
        diag_[v] = d1;
        open_.push({nd * topo_->grid_step(), static_cast<int>(v)});
      }
    }
  }

  std::shared_ptr<const SubcellMap> topo_;
  int source_;
  std::vector<std::uint16_t> straight_, diag_;
  std::vector<std::uint8_t> done_;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> open_;
};

enum class EstimatorKind { Oracle, WallPiercing, Scaled, Noisy, Composite };

struct EstimatorSpec {
  EstimatorKind kind = EstimatorKind::Oracle;
  double scale = 1.0;             // Scaled / Composite multiplier, > 0
  double noise_rel_std = 0.0;     // Noisy / Composite relative std, >= 0
  double pierce_fraction = 0.0;   // WallPiercing / Composite pair fraction, [0,1]
  double pierce_cap = 8.0;        // pierce only when oracle <= cap * euclidean
  std::uint64_t pierce_salt = 0;  // fixes which pairs pierce
  int resolution = 4;             // oracle subdivisions per cell

  void validate() const {
    if (scale <= 0.0) throw std::invalid_argument("estimator scale must be > 0");
    if (noise_rel_std < 0.0) throw std::invalid_argument("noise_rel_std must be >= 0");
    if (pierce_fraction < 0.0 || pierce_fraction > 1.0)
      throw std::invalid_argument("pierce_fraction must be in [0,1]");
    if (pierce_cap <= 0.0) throw std::invalid_argument("pierce_cap must be > 0");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  }
};

// Pluggable distance estimator bound to one world. Thread-safe; for parallel
// rollouts prefer one fresh_clone() per worker so field caches do not contend.
class DistanceEstimator {
 public:
  DistanceEstimator(const MazeWorld& world, EstimatorSpec spec = {})
      : world_(&world), spec_(spec),
        topo_(std::make_shared<const SubcellMap>(world, spec.resolution)),
        cache_(std::make_unique<Cache>()) {
    spec_.validate();
  }

  DistanceEstimator(DistanceEstimator&&) = default;
  DistanceEstimator& operator=(DistanceEstimator&&) = default;

  // Same spec and topology, empty field cache.
  DistanceEstimator fresh_clone() const { return DistanceEstimator(world_, spec_, topo_); }

  const MazeWorld& world() const { return *world_; }
  const EstimatorSpec& spec() const { return spec_; }
  const SubcellMap& topo() const { return *topo_; }

  bool reachable(Point a, Point b) const {
    int ia = checked_index(a), ib = checked_index(b);
    return topo_->component(ia) == topo_->component(ib);
  }

  // Uncorrupted geodesic; kUnreachable when disconnected.
  double oracle(Point a, Point b) const {
    int ia = checked_index(a), ib = checked_index(b);
    if (topo_->component(ia) != topo_->component(ib)) return kUnreachable;
    std::scoped_lock lk(cache_->mu);
    return oracle_within(ia, ib, kUnreachable);
  }

  double estimate(Point a, Point b, Rng& rng) const {
    return estimate_within(a, b, kUnreachable, rng);
  }

  // Exact estimate when it is < cutoff, kUnreachable otherwise. Graph
  // construction only ever needs this form, which is what lets fields stay
  // small: expansion is bounded by the cutoff, not by the pair separation.
  double estimate_within(Point a, Point b, double cutoff, Rng& rng) const {
    int ia = checked_index(a), ib = checked_index(b);
    std::scoped_lock lk(cache_->mu);
    ++cache_->queries;
    // Corruption draws happen before any oracle work so the consumed rng
    // stream does not depend on the cutoff.
    double noise_factor = 1.0;
    if (spec_.kind == EstimatorKind::Noisy || spec_.kind == EstimatorKind::Composite)
      noise_factor = 1.0 + rng.normal(0.0, spec_.noise_rel_std);

    if (topo_->component(ia) != topo_->component(ib)) return kUnreachable;

    const bool pierce_kind = spec_.kind == EstimatorKind::WallPiercing ||
                             spec_.kind == EstimatorKind::Composite;
    const bool noisy_kind = spec_.kind == EstimatorKind::Noisy ||
                            spec_.kind == EstimatorKind::Composite;
    const bool scaled_kind = spec_.kind == EstimatorKind::Scaled ||
                             spec_.kind == EstimatorKind::Composite;
    const double scale = scaled_kind ? spec_.scale : 1.0;

    if (noisy_kind && noise_factor <= 0.0) return 0.0;  // clamped at zero
    const double factor = noisy_kind ? noise_factor : 1.0;

    // Oracle value needed exactly whenever the final value may land < cutoff.
    double oracle_cut = cutoff / (scale * factor);
    double eu = 0.0;
    bool pierced = false;
    if (pierce_kind && pair_pierced(a, b)) {
      pierced = true;
      eu = distance(a, b);
      double decide = spec_.pierce_cap * eu * (1.0 + 1e-12) + 1e-12;
      oracle_cut = std::max(oracle_cut, decide);
    }
    double v = oracle_within(ia, ib, oracle_cut);
    if (is_unreachable(v)) return kUnreachable;  // >= cutoff and not pierceable
    if (pierced && v <= spec_.pierce_cap * eu) v = std::min(v, eu);
    v = std::max(0.0, v * factor) * scale;
    return v < cutoff ? v : kUnreachable;
  }

  // Symmetrized (conservative) estimate: max over the two directions.
  double sym(Point a, Point b, Rng& rng) const {
    return std::max(estimate(a, b, rng), estimate(b, a, rng));
  }

  double sym_within(Point a, Point b, double cutoff, Rng& rng) const {
    double ab = estimate_within(a, b, cutoff, rng);
    double ba = estimate_within(b, a, cutoff, rng);
    return std::max(ab, ba);
  }

  // Running count of estimate calls; the compute-cost proxy for task time.
  std::uint64_t query_count() const {
    std::scoped_lock lk(cache_->mu);
    return cache_->queries;
  }

  // Euclidean pre-filter radius for edge candidates: pairs farther apart than
  // this cannot produce an estimate < cutoff, because the oracle is bounded
  // below by euclidean - grid_step and the corruptions here only scale or
  // clamp toward euclidean. Unavailable (nullopt) for noisy estimators whose
  // multiplicative noise has no lower bound.
  std::optional<double> euclid_edge_cutoff(double cutoff) const {
    switch (spec_.kind) {
      case EstimatorKind::Oracle:
        return cutoff + topo_->grid_step();
      case EstimatorKind::Scaled:
        return cutoff / spec_.scale + topo_->grid_step();
      case EstimatorKind::WallPiercing:
        // Pierced values are min(oracle, euclidean): an edge needs either
        // euclidean < cutoff or oracle < cutoff.
        return cutoff + topo_->grid_step();
      case EstimatorKind::Noisy:
      case EstimatorKind::Composite:
        return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  DistanceEstimator(const MazeWorld* world, EstimatorSpec spec,
                    std::shared_ptr<const SubcellMap> topo)
      : world_(world), spec_(spec), topo_(std::move(topo)),
        cache_(std::make_unique<Cache>()) {}

  int checked_index(Point p) const {
    if (!world_->is_free(p))
      throw std::invalid_argument("distance estimate requires free endpoints");
    return topo_->index_of(p);
  }

  // Stable per-unordered-pair decision, keyed by coordinate bits and salt.
  bool pair_pierced(Point a, Point b) const {
    if (spec_.pierce_fraction <= 0.0) return false;
    auto bits = [](double v) {
      std::uint64_t u;
      static_assert(sizeof(u) == sizeof(v));
      std::memcpy(&u, &v, sizeof(u));
      return u;
    };
    Point lo = a, hi = b;
    if (hi.x < lo.x || (hi.x == lo.x && hi.y < lo.y)) std::swap(lo, hi);
    std::uint64_t h = hash_mix(spec_.pierce_salt ^ 0x9d2c5680ull, bits(lo.x));
    h = hash_mix(h, bits(lo.y));
    h = hash_mix(h, bits(hi.x));
    h = hash_mix(h, bits(hi.y));
    return bits_to_unit(h) < spec_.pierce_fraction;
  }

  // Looks for an existing field at either endpoint before creating one at b;
  // waypoints therefore accumulate one field each while moving query points
  // piggyback on them.
  double oracle_within(int ia, int ib, double cutoff) const {
    if (ia == ib) return 0.0;
    DistanceField* f = nullptr;
    int q = ia;
    auto& fields = cache_->fields;
    if (auto it = fields.find(ib); it != fields.end()) {
      f = it->second.get();
    } else if (auto it2 = fields.find(ia); it2 != fields.end()) {
      f = it2->second.get();
      q = ib;
    } else {
      auto owned = std::make_unique<DistanceField>(topo_, ib);
      f = owned.get();
      fields.emplace(ib, std::move(owned));
    }
    return f->query(q, cutoff);
  }

  struct Cache {
    std::mutex mu;
    std::unordered_map<int, std::unique_ptr<DistanceField>> fields;
    std::uint64_t queries = 0;
  };

  const MazeWorld* world_;
  EstimatorSpec spec_;
  std::shared_ptr<const SubcellMap> topo_;
  mutable std::unique_ptr<Cache> cache_;
};

// One-shot oracle distance; builds a fresh field (convenience for tests and
// small tools, not for hot loops).
inline double oracle_distance(const MazeWorld& world, Point a, Point b,
                              int resolution = 4) {
  EstimatorSpec spec;
  spec.resolution = resolution;
  DistanceEstimator est(world, spec);
  return est.oracle(a, b);
}

// Full distance field from one source, all free subcells settled.
struct DistanceFieldSnapshot {
  int nx = 0, ny = 0;
  double grid_step = 0.0;
  Point source;
  std::vector<double> dist;  // kUnreachable for walls and other components

  double at(int x, int y) const { return dist[static_cast<std::size_t>(y) * nx + x]; }
};

inline DistanceFieldSnapshot distance_field(const MazeWorld& world, Point source,
                                            int resolution = 4) {
  if (!world.is_free(source))
    throw std::invalid_argument("distance_field requires a free source");
  auto topo = std::make_shared<const SubcellMap>(world, resolution);
  int src = topo->index_of(source);
  DistanceField f(topo, src);
  f.complete();
  DistanceFieldSnapshot snap;
  snap.nx = topo->nx();
  snap.ny = topo->ny();
  snap.grid_step = topo->grid_step();
  snap.source = source;
  snap.dist.assign(topo->size(), kUnreachable);
  for (std::size_t i = 0; i < topo->size(); ++i)
    if (f.settled(static_cast<int>(i))) snap.dist[i] = f.settled_value(static_cast<int>(i));
  return snap;
}

}  // namespace planlab
