#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "sarsim/drift.hpp"
#include "sarsim/errors.hpp"
#include "sarsim/planners.hpp"

using namespace sarsim;

namespace {

// Permutations in lexicographic order by recursive construction.
void all_orders(std::size_t n, std::vector<int>& cur, std::vector<bool>& used, std::vector<std::vector<int>>& out) {
  if (cur.size() == n) {
    out.push_back(cur);
    return;
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (used[k]) continue;
    used[k] = true;
    cur.push_back(static_cast<int>(k));
    all_orders(n, cur, used, out);
    cur.pop_back();
    used[k] = false;
  }
}

std::vector<int> reference_order(Vec2 start, const std::vector<Vec2>& c) {
  std::vector<std::vector<int>> orders;
  std::vector<int> cur;
  std::vector<bool> used(c.size(), false);
  all_orders(c.size(), cur, used, orders);
  std::vector<int> best;
  double best_len = 1e300;
  for (const auto& o : orders) {
    double len = 0.0;
    Vec2 at = start;
    for (int k : o) {
      len += std::hypot(c[k].x - at.x, c[k].y - at.y);
      at = c[k];
    }
    if (len < best_len) {
      best_len = len;
      best = o;
    }
  }
  return best;
}

struct Scene {
  GridWorld world{{0.0, 0.0}, 100.0, 200, 200};
  std::vector<ParticleEnsemble> ensembles;
  std::vector<std::uint8_t> found;

  PlannerObservation obs(Cell uav, double t = 0.0, bool observed = true) const {
    PlannerObservation o;
    o.uav = uav;
    o.time = t;
    o.world = &world;
    o.ensembles = ensembles;
    o.found = found;
    o.current_cell_observed = observed;
    return o;
  }
};

}  // namespace

TEST_SUITE("planners") {
  TEST_CASE("order_targets agrees with an independent enumeration") {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
      const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 6));
      std::vector<Vec2> c(n);
      for (auto& p : c) {
        // Coarse coordinates produce frequent ties.
        p = {1000.0 * static_cast<double>(uniform_int(rng, -3, 3)), 1000.0 * static_cast<double>(uniform_int(rng, -3, 3))};
      }
      CHECK(order_targets({0.0, 0.0}, c) == reference_order({0.0, 0.0}, c));
    }
  }

  TEST_CASE("order_targets examples and limits") {
    const std::vector<Vec2> c{{0.0, 30000.0}, {0.0, 10000.0}};
    CHECK(order_targets({0.0, 0.0}, c) == std::vector<int>{1, 0});
    // Mirror-symmetric pair: equal lengths, the smaller permutation wins.
    const std::vector<Vec2> sym{{-5000.0, 10000.0}, {5000.0, 10000.0}};
    CHECK(order_targets({0.0, 0.0}, sym) == std::vector<int>{0, 1});
    CHECK_THROWS_AS(order_targets({0, 0}, std::vector<Vec2>(9, Vec2{1, 1})), ConfigError);
    CHECK_THROWS_AS(order_targets({0, 0}, std::vector<Vec2>{}), ConfigError);
    CHECK(order_targets({0, 0}, std::vector<Vec2>(8, Vec2{1, 1})).size() == 8);
  }

  TEST_CASE("step_toward moves along the dominant axis") {
    CHECK(step_toward({0, 0}, {5, 2}) == Cell{1, 0});
    CHECK(step_toward({0, 0}, {2, -5}) == Cell{0, -1});
    CHECK(step_toward({0, 0}, {3, 3}) == Cell{1, 0});
    CHECK(step_toward({0, 0}, {-3, 3}) == Cell{-1, 0});
    CHECK(step_toward({4, 4}, {4, 4}) == Cell{4, 4});
    Rng rng(3);
    for (int k = 0; k < 500; ++k) {
      const Cell a{static_cast<int>(uniform_int(rng, -20, 20)), static_cast<int>(uniform_int(rng, -20, 20))};
      const Cell b{static_cast<int>(uniform_int(rng, -20, 20)), static_cast<int>(uniform_int(rng, -20, 20))};
      if (a == b) continue;
      const Cell s = step_toward(a, b);
      CHECK(manhattan(a, s) == 1);
      CHECK(manhattan(s, b) == manhattan(a, b) - 1);
    }
  }

  TEST_CASE("square spiral runs 1,1,2,2,... East, North, West, South") {
    SquareSpiral s;
    std::vector<Cell> got{s.offset()};
    for (int k = 0; k < 12; ++k) {
      s.advance();
      got.push_back(s.offset());
    }
    const std::vector<Cell> want{{0, 0},  {1, 0},  {1, 1},  {0, 1},  {-1, 1}, {-1, 0}, {-1, -1},
                                 {0, -1}, {1, -1}, {2, -1}, {2, 0},  {2, 1},  {2, 2}};
    CHECK(got == want);
  }

  TEST_CASE("square spiral covers each concentric square exactly once") {
    for (int r = 0; r <= 10; ++r) {
      SquareSpiral s;
      std::set<Cell> seen;
      const int count = (2 * r + 1) * (2 * r + 1);
      Cell prev = s.offset();
      for (int k = 0; k < count; ++k) {
        const Cell c = s.offset();
        if (k > 0) CHECK(manhattan(prev, c) == 1);
        CHECK(chebyshev(c, {0, 0}) <= r);
        CHECK(seen.insert(c).second);
        prev = c;
        s.advance();
      }
      CHECK(static_cast<int>(seen.size()) == count);
    }
  }

  TEST_CASE("boustrophedon sweeps cover every rectangle once from every corner") {
    for (int w = 1; w <= 30; ++w)
      for (int h = 1; h <= 30; ++h) {
        const Rect r{10, 10 + w - 1, -5, -5 + h - 1};
        for (Cell corner : {Cell{r.i_min, r.j_min}, Cell{r.i_max, r.j_min}, Cell{r.i_min, r.j_max}, Cell{r.i_max, r.j_max}}) {
          const auto sweep = boustrophedon_sweep(r, corner);
          REQUIRE(sweep.size() == static_cast<std::size_t>(w * h));
          CHECK(sweep.front() == corner);
          std::set<Cell> seen(sweep.begin(), sweep.end());
          CHECK(seen.size() == sweep.size());
          bool adjacent = true, inside = true;
          for (std::size_t k = 0; k < sweep.size(); ++k) {
            inside = inside && r.contains(sweep[k]);
            if (k > 0) adjacent = adjacent && manhattan(sweep[k - 1], sweep[k]) == 1;
          }
          CHECK(adjacent);
          CHECK(inside);
        }
      }
    CHECK_THROWS_AS(boustrophedon_sweep(Rect{0, 3, 0, 3}, {1, 0}), ConfigError);
  }

  TEST_CASE("nearest corner") {
    const Rect r{10, 20, 10, 20};
    CHECK(nearest_corner(r, {0, 0}) == Cell{10, 10});
    CHECK(nearest_corner(r, {30, 0}) == Cell{20, 10});
    CHECK(nearest_corner(r, {15, 30}) == Cell{10, 20});
  }

  TEST_CASE("take-off hold when belief sits on the take-off cell") {
    Scene s;
    s.ensembles.emplace_back(0, std::vector<Vec2>{{5050.0, 5050.0}, {9050.0, 9050.0}});
    s.found = {0};
    for (auto kind : {PlannerKind::Spiral, PlannerKind::Boustrophedon, PlannerKind::BnB}) {
      PlannerSpec spec;
      spec.kind = kind;
      auto p = make_planner(spec);
      CHECK(p->plan(s.obs({50, 50}, 0.0, false)).is_hold({50, 50}));
      CHECK_FALSE(p->plan(s.obs({50, 50}, 0.0, true)).is_hold({50, 50}));
    }
  }

  TEST_CASE("spiral transits toward the centre of gravity then spirals") {
    Scene s;
    std::vector<Vec2> pts{{10050.0, 10050.0}, {10050.0, 10150.0}, {10150.0, 10050.0}, {9950.0, 9950.0}};
    s.ensembles.emplace_back(0, pts);
    s.found = {0};
    SpiralPlanner p;
    Cell at{90, 100};
    for (int k = 0; k < 10; ++k) at = p.plan(s.obs(at)).next;
    CHECK(at == s.world.clamped_cell_of(center_of_gravity(s.ensembles[0])));
    const Cell anchor = at;
    std::vector<Cell> path;
    for (int k = 0; k < 8; ++k) {
      at = p.plan(s.obs(at)).next;
      path.push_back({at.i - anchor.i, at.j - anchor.j});
    }
    CHECK(path == std::vector<Cell>{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}});
  }

  TEST_CASE("every planner issues legal moves and goes quiet when nothing is left") {
    Rng rng(5);
    Scene s;
    s.ensembles.push_back(init_ensemble({12000.0, 9000.0}, 500, 500.0, rng, 0));
    s.ensembles.push_back(init_ensemble({6000.0, 14000.0}, 500, 500.0, rng, 1));
    s.found = {0, 0};
    for (auto kind : {PlannerKind::Spiral, PlannerKind::Boustrophedon, PlannerKind::BnB, PlannerKind::Hold}) {
      PlannerSpec spec;
      spec.kind = kind;
      spec.bnb.max_expansions = 500;
      auto p = make_planner(spec);
      Cell at{100, 100};
      for (int k = 0; k < 300; ++k) {
        const PlannerCommand c = p->plan(s.obs(at, k * 5.0));
        CHECK(is_legal(c, at, s.world));
        at = c.next;
      }
      s.found = {1, 1};
      CHECK(p->plan(s.obs(at, 2000.0)).is_hold(at));
      s.found = {0, 0};
    }
  }

  TEST_CASE("stop-after-first wrapper") {
    PlannerSpec spec;
    spec.stop_after_first = true;
    auto p = make_planner(spec);
    CHECK_FALSE(p->done());
    p->notify_found(1);
    CHECK(p->done());
    CHECK(p->name() == "Spiral (stop after first)");
  }

  TEST_CASE("labels and names") {
    PlannerSpec spec;
    spec.kind = PlannerKind::BnB;
    spec.bnb.budget_s = 35 * 60.0;
    CHECK(spec.label() == "B&B 35");
    CHECK(make_planner(spec)->name() == "B&B 35");
    CHECK(parse_planner_kind("boustrophedon") == PlannerKind::Boustrophedon);
    CHECK_THROWS_AS(parse_planner_kind("astar"), ConfigError);
    spec.eta = 1.0;
    CHECK_THROWS_AS(make_planner(spec), ConfigError);
  }
}
