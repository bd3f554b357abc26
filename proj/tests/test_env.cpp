#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "planlab/env.hpp"
#include "planlab/maps.hpp"

using namespace planlab;

namespace {

MazeWorld open_world(int cells) {
  std::string text;
  for (int r = 0; r < cells; ++r) {
    for (int c = 0; c < cells; ++c) {
      bool border = r == 0 || c == 0 || r == cells - 1 || c == cells - 1;
      text += border ? '#' : '.';
    }
    text += '\n';
  }
  MazeWorld w = MazeWorld::from_text(text);
  w.noise_std = 0.0;
  return w;
}

}  // namespace

TEST_CASE("load minimal map") {
  MazeWorld w = load_maze("###\n#.#\n###");
  CHECK(w.width() == 3);
  CHECK(w.height() == 3);
  CHECK(w.free_cells() == 1);
  CHECK(w.is_free({1.5, 1.5}));
  CHECK_FALSE(w.is_free({0.5, 0.5}));
}

TEST_CASE("interior wall segment blocks cells") {
  MazeWorld w = load_maze(
      "######\n"
      "#....#\n"
      "#.##.#\n"
      "#....#\n"
      "######");
  CHECK_FALSE(w.is_free({2.5, 2.5}));
  CHECK_FALSE(w.is_free({3.5, 2.5}));
  CHECK(w.is_free({1.5, 2.5}));
}

TEST_CASE("default map loads and free count matches the text") {
  MazeWorld w = MazeWorld::from_text(maps::kDefault);
  CHECK(w.width() == 35);
  CHECK(w.height() == 35);
  long dots = std::count(maps::kDefault.begin(), maps::kDefault.end(), '.');
  CHECK(w.free_cells() == dots);
  CHECK(w.free_cells() == 1069);
  CHECK(w.is_free({33.0, 33.0}));
  CHECK(w.is_free({5.0, 7.0}));
}

TEST_CASE("windows line endings are tolerated") {
  MazeWorld w = load_maze("###\r\n#.#\r\n###\r\n");
  CHECK(w.free_cells() == 1);
}

TEST_CASE("malformed maps are rejected") {
  CHECK_THROWS_AS(load_maze("###\n#.##\n###"), MapError);   // ragged
  CHECK_THROWS_AS(load_maze("###\n#x#\n###"), MapError);    // illegal char
  CHECK_THROWS_AS(load_maze("###\n#..\n###"), MapError);    // open border
  CHECK_THROWS_AS(load_maze("###\n###\n###"), MapError);    // no free cell
  CHECK_THROWS_AS(load_maze(""), MapError);
}

TEST_CASE("boundary tie rule uses floor indices") {
  MazeWorld w = load_maze(
      "#####\n"
      "#.#.#\n"
      "#####");
  // x = 2.0 is exactly the boundary between free cell 1 and wall cell 2;
  // floor assigns it to cell 2.
  CHECK_FALSE(w.is_free({2.0, 1.5}));
  CHECK(w.is_free({3.0, 1.5}));
  CHECK_FALSE(w.is_free({4.0, 1.5}));
}

TEST_CASE("noiseless step in open space") {
  MazeWorld w = open_world(12);
  Rng rng(1);
  Point p = step(w, {5.0, 5.0}, {1.0, 0.0}, rng);
  CHECK(p.x == doctest::Approx(6.0));
  CHECK(p.y == doctest::Approx(5.0));
}

TEST_CASE("step truncates at the first wall crossing") {
  MazeWorld w = load_maze(
      "########\n"
      "#....#.#\n"
      "########");
  w.noise_std = 0.0;
  Rng rng(1);
  // Wall cell starts at x=5; from x=4.6 a unit move stops eps short of it.
  Point p = step(w, {4.6, 1.5}, {1.0, 0.0}, rng);
  CHECK(p.x == doctest::Approx(5.0 - 1e-3).epsilon(1e-9));
  CHECK(w.is_free(p));
}

TEST_CASE("step noise has the configured std") {
  MazeWorld w = open_world(40);
  w.noise_std = 0.3;
  Rng rng(77);
  const int n = 100000;
  double sum = 0, sum2 = 0;
  Point s{20.0, 20.0};
  for (int i = 0; i < n; ++i) {
    Point p = step(w, s, {0.0, 0.0}, rng);
    double dx = p.x - s.x;
    sum += dx;
    sum2 += dx * dx;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::sqrt(var) == doctest::Approx(0.3).epsilon(0.034));
}

TEST_CASE("react points at the subgoal and clamps") {
  MazeWorld w = open_world(12);
  ReactionModel m;
  Rng rng(3);
  Vec2 a = react(m, w, {2.0, 2.0}, {7.0, 2.0}, rng);
  CHECK(a.x == doctest::Approx(1.0));
  CHECK(a.y == doctest::Approx(0.0));
  Vec2 b = react(m, w, {2.0, 2.0}, {2.3, 2.0}, rng);
  CHECK(b.x == doctest::Approx(0.3));
  CHECK(b.y == doctest::Approx(0.0));
}

TEST_CASE("greedy controller pins at a wall") {
  MazeWorld w = MazeWorld::from_text(maps::kTwoRoom);
  w.noise_std = 0.0;
  ReactionModel m;
  Rng rng(5);
  Point pos{7.5, 7.5}, subgoal{9.5, 7.5};
  for (int i = 0; i < 30; ++i) {
    Vec2 a = react(m, w, pos, subgoal, rng);
    pos = step(w, pos, a, rng);
  }
  CHECK(pos.x < 8.0);                       // never crosses the wall at x=8
  CHECK(distance(pos, subgoal) > 1.5);      // no progress to the subgoal
}

TEST_CASE("sample_free: single free cell, postcondition on default map") {
  MazeWorld tiny = load_maze("###\n#.#\n###");
  Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Point p = sample_free(tiny, rng);
    CHECK(p.x > 1.0);
    CHECK(p.x < 2.0);
    CHECK(p.y > 1.0);
    CHECK(p.y < 2.0);
  }
  MazeWorld def = MazeWorld::from_text(maps::kDefault);
  for (int i = 0; i < 1000; ++i) CHECK(def.is_free(sample_free(def, rng)));
}

TEST_CASE("sample_free is uniform over cells (chi-squared)") {
  MazeWorld w = open_world(10);  // 8x8 free interior
  Rng rng(123);
  const int n = 100000;
  std::vector<int> counts(64, 0);
  for (int i = 0; i < n; ++i) {
    Point p = sample_free(w, rng);
    int cx = static_cast<int>(p.x) - 1, cy = static_cast<int>(p.y) - 1;
    ++counts[static_cast<std::size_t>(cy) * 8 + cx];
  }
  double expected = n / 64.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // 63 dof; 0.999 quantile is ~103.4
  CHECK(chi2 < 103.4);
}

TEST_CASE("property: step never lands in a wall") {
  MazeWorld w = MazeWorld::from_text(maps::kDefault);
  w.noise_std = 0.3;
  Rng rng(2024);
  Point pos = sample_free(w, rng);
  for (int i = 0; i < 100000; ++i) {
    double ang = rng.uniform(0.0, 6.2831853);
    double mag = rng.uniform(0.0, w.max_step);
    pos = step(w, pos, {mag * std::cos(ang), mag * std::sin(ang)}, rng);
    REQUIRE(w.is_free(pos));
  }
}

TEST_CASE("property: noiseless react+step approaches a visible subgoal") {
  MazeWorld w = open_world(20);
  ReactionModel m;
  Rng rng(9);
  Point pos{2.5, 2.5}, subgoal{16.5, 14.5};
  double prev = distance(pos, subgoal);
  while (prev > w.max_step) {
    Vec2 a = react(m, w, pos, subgoal, rng);
    pos = step(w, pos, a, rng);
    double d = distance(pos, subgoal);
    REQUIRE(d < prev);
    prev = d;
  }
}

TEST_CASE("property: truncation stays on the segment and crosses no wall") {
  MazeWorld w = MazeWorld::from_text(maps::kDefault);
  Rng rng(31337);
  for (int trial = 0; trial < 2000; ++trial) {
    Point s = sample_free(w, rng);
    Point c{s.x + rng.uniform(-3.0, 3.0), s.y + rng.uniform(-3.0, 3.0)};
    Point r = truncate_motion(w, s, c);
    Vec2 d = c - s, rd = r - s;
    double len = norm(d);
    if (len == 0.0) continue;
    // On the segment: parallel and parameter in [0, 1].
    double t = (rd.x * d.x + rd.y * d.y) / (len * len);
    REQUIRE(t >= -1e-12);
    REQUIRE(t <= 1.0 + 1e-12);
    REQUIRE(std::abs(rd.x * d.y - rd.y * d.x) < 1e-9);
    // No wall crossed: dense sampling along s -> r.
    for (int k = 0; k <= 40; ++k) {
      Point q = s + rd * (k / 40.0);
      REQUIRE(w.is_free(q));
    }
  }
}
