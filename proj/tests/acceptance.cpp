// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sarsim/belief.hpp"
#include "sarsim/drift.hpp"
#include "sarsim/engine.hpp"
#include "sarsim/harness.hpp"
#include "sarsim/planners.hpp"

using namespace sarsim;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Straight transits of 10 and 30 km at 18 m/s over 100 m cells.
Verdict transit_times() {
  Verdict v{true, {}};
  for (auto [km, expect_min] : {std::pair{10.0, 9.26}, std::pair{30.0, 27.78}}) {
    SimConfig cfg;
    cfg.grid = GridWorld({-40000.0, -40000.0}, 100.0, 800, 800);
    cfg.takeoff = cfg.grid.center_of(*cfg.grid.cell_of({0.0, 0.0}));
    const Vec2 lo = cfg.grid.extent_min(), hi = cfg.grid.extent_max();
    cfg.fields = std::make_shared<const FieldPair>(
        FieldPair{VectorField::constant({0, 0}, lo, hi, 10800.0), VectorField::constant({0, 0}, lo, hi, 10800.0)});
    cfg.drift.diffusion_coeff = 0.0;
    cfg.targets.push_back({cfg.takeoff + Vec2{0.0, km * 1000.0}});
    cfg.particles = 100;
    cfg.sigma_init_m = 0.0;
    const RunRecord r = run_simulation(cfg);
    const auto t = r.first_detection_time();
    const double got = t ? *t / 60.0 : -1.0;
    const bool ok = t && std::abs(got - expect_min) <= cfg.tick_dt / 60.0;
    v.pass = v.pass && ok;
    v.detail += fmt("%.0f km ", km) + fmt("%.2f min; ", got);
  }
  return v;
}

// 2. Negative update against a direct Bayes computation.
Verdict filter_correctness() {
  const GridWorld grid({0.0, 0.0}, 100.0, 100, 100);
  Rng rng(20);
  double worst = 0.0;
  bool erased_ok = true;
  for (double eps : {0.0, 0.1, 0.5}) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto n = static_cast<std::size_t>(uniform_int(rng, 1, 100));
      std::vector<Vec2> pts(n);
      for (auto& p : pts) p = {5000.0 + 300.0 * uniform01(rng), 5000.0 + 300.0 * uniform01(rng)};
      ParticleEnsemble e(0, pts, eps);
      std::vector<double> w(n, 1.0 / static_cast<double>(n));
      for (int obs = 0; obs < 3; ++obs) {
        const Cell c{50 + static_cast<int>(uniform_int(rng, 0, 2)), 50 + static_cast<int>(uniform_int(rng, 0, 2))};
        std::vector<double> post(n);
        double z = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const bool in = std::floor(pts[k].x / 100.0) == c.i && std::floor(pts[k].y / 100.0) == c.j;
          post[k] = w[k] * (in ? eps : 1.0 - eps);
          z += post[k];
        }
        negative_update(e, c, grid);
        if (z <= 0.0) break;
        for (auto& p : post) p /= z;
        w = post;
        for (std::size_t k = 0; k < n; ++k) {
          const double got = e.alive(k) ? e.weights()[k] : 0.0;
          worst = std::max(worst, std::abs(got - w[k]));
        }
        if (eps == 0.0) {
          for (std::size_t k = 0; k < n; ++k)
            if (e.alive(k) && grid.cell_of(pts[k]) == std::optional<Cell>(c)) erased_ok = false;
          if (std::abs(e.alive_weight_sum() - 1.0) > 1e-9) erased_ok = false;
        }
      }
    }
  }
  return {worst <= 1e-12 && erased_ok, fmt("max |diff| %.2e", worst) + (erased_ok ? "; erasure ok" : "; erasure broken")};
}

// 3. Per-axis displacement variance under zero fields.
Verdict diffusion_scaling() {
  const std::size_t n = 100'000;
  DriftParams p;
  p.diffusion_coeff = 1.0;
  const Vec2 lo{-1e6, -1e6}, hi{1e6, 1e6};
  const FieldPair fields{VectorField::constant({0, 0}, lo, hi, 100.0), VectorField::constant({0, 0}, lo, hi, 100.0)};
  std::vector<Vec2> pos(n, Vec2{0.0, 0.0});
  Rng rng(30);
  drift_step(pos, fields, 0.0, p, rng);
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0;
  for (const auto& q : pos) {
    sx += q.x;
    sy += q.y;
    sxx += q.x * q.x;
    syy += q.y * q.y;
  }
  const double m = static_cast<double>(n);
  const double vx = sxx / m - (sx / m) * (sx / m);
  const double vy = syy / m - (sy / m) * (sy / m);
  const double expect = 2.0 * p.diffusion_coeff * p.dt;
  const bool ok = std::abs(vx / expect - 1.0) <= 0.05 && std::abs(vy / expect - 1.0) <= 0.05;
  return {ok, fmt("var x %.2f", vx) + fmt(", y %.2f", vy) + fmt(", expected %.2f", expect)};
}

// 4. Heuristic branch and bound against exhaustive enumeration.
Verdict bnb_vs_oracle() {
  Rng rng(40);
  double min_ratio = 1.0, sum = 0.0;
  int n = 0;
  for (int inst = 0; inst < 100; ++inst) {
    CellWeights cw(Rect{0, 5, 0, 5});
    const int cells = static_cast<int>(uniform_int(rng, 1, 20));
    std::vector<int> idx(36);
    std::iota(idx.begin(), idx.end(), 0);
    for (int k = 0; k < cells; ++k) {
      const auto pick = static_cast<std::size_t>(uniform_int(rng, k, 35));
      std::swap(idx[static_cast<std::size_t>(k)], idx[pick]);
      cw.w[static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])] = uniform01(rng) + 1e-3;
    }
    const Cell start{static_cast<int>(uniform_int(rng, 0, 5)), static_cast<int>(uniform_int(rng, 0, 5))};
    BnBConfig cfg;
    cfg.horizon = 8;
    cfg.beam = BnBConfig::kUnlimited;
    cfg.max_expansions = BnBConfig::kUnlimited;
    const double opt = exact_oracle(cw, start, 8).value;
    const double got = bnb_search(cw, start, cfg).value;
    const double ratio = opt > 0.0 ? got / opt : 1.0;
    min_ratio = std::min(min_ratio, ratio);
    sum += ratio;
    ++n;
  }
  const double mean = sum / n;
  return {min_ratio >= 0.8 && mean >= 0.95, fmt("min ratio %.4f", min_ratio) + fmt(", mean %.4f", mean)};
}

// 5. Sweep and spiral coverage.
Verdict coverage() {
  int rects = 0;
  bool ok = true;
  for (int w = 1; w <= 30 && ok; ++w)
    for (int h = 1; h <= 30 && ok; ++h) {
      const Rect r{10, 10 + w - 1, 20, 20 + h - 1};
      for (Cell corner : {Cell{r.i_min, r.j_min}, Cell{r.i_max, r.j_min}, Cell{r.i_min, r.j_max}, Cell{r.i_max, r.j_max}}) {
        const auto sweep = boustrophedon_sweep(r, corner);
        std::set<std::pair<int, int>> seen;
        for (std::size_t k = 0; k < sweep.size(); ++k) {
          if (!r.contains(sweep[k]) || !seen.insert({sweep[k].i, sweep[k].j}).second) ok = false;
          if (k > 0 && manhattan(sweep[k - 1], sweep[k]) != 1) ok = false;
        }
        if (static_cast<long>(seen.size()) != r.area() || sweep.front() != corner) ok = false;
      }
      ++rects;
    }

  SquareSpiral s;
  std::set<std::pair<int, int>> seen;
  for (int r = 0; r <= 10 && ok; ++r) {
    const int ring = r == 0 ? 1 : 8 * r;
    for (int k = 0; k < ring; ++k) {
      const Cell c = s.offset();
      if (std::max(std::abs(c.i), std::abs(c.j)) != r || !seen.insert({c.i, c.j}).second) ok = false;
      s.advance();
    }
    if (static_cast<int>(seen.size()) != (2 * r + 1) * (2 * r + 1)) ok = false;
  }
  return {ok, std::to_string(rects) + " rectangles x 4 corners, spiral radius 10"};
}

// Library defaults except: one hour of endurance and 1000 particles per target.
ScenarioSpec experiment_base() {
  ScenarioSpec s;
  s.runs = 200;
  s.seed = 20240501;
  s.particles = 1000;
  s.endurance_s = 3600.0;
  return s;
}

const MetricsRow& row_of(const MetricsTable& t, const std::string& name) {
  for (const auto& r : t.rows)
    if (r.planner == name) return r;
  throw std::runtime_error("missing row " + name);
}

// 6. Orderings across planners and distances.
Verdict trend_orderings() {
  const auto tables = run_comparison(experiment_base(), {10.0, 20.0, 30.0}, standard_planners(), 0);
  for (const auto& t : tables) write_table_text(std::cout, t);

  std::string detail;
  bool a = true;
  for (const auto& r : tables[0].rows) {
    const double s10 = r.success_rate, s20 = row_of(tables[1], r.planner).success_rate,
                 s30 = row_of(tables[2], r.planner).success_rate;
    if (!(s10 > s20 && s20 > s30)) a = false;
  }
  bool b = true;
  for (const auto& t : tables)
    if (!(row_of(t, "B&B 50").success_rate >= row_of(t, "B&B 35").success_rate &&
          row_of(t, "B&B 35").success_rate >= row_of(t, "B&B 15").success_rate))
      b = false;
  const double gap10 = row_of(tables[0], "Spiral").success_rate - row_of(tables[0], "Boustrophedon").success_rate;
  const double gap30 = row_of(tables[2], "Spiral").success_rate - row_of(tables[2], "Boustrophedon").success_rate;
  const bool c = gap10 > 0.0 && gap30 <= gap10;
  bool d = row_of(tables[0], "Spiral").time_first_min.has_value();
  for (const auto& r : tables[0].rows)
    if (r.planner != "Spiral" && r.time_first_min && d && *r.time_first_min <= *row_of(tables[0], "Spiral").time_first_min)
      d = false;
  detail = std::string("a ") + (a ? "ok" : "FAIL") + ", b " + (b ? "ok" : "FAIL") + ", c " + (c ? "ok" : "FAIL") +
           ", d " + (d ? "ok" : "FAIL");
  return {a && b && c && d, detail};
}

// 7. First-target ratio for a planner that quits after one detection.
Verdict first_ratio() {
  ScenarioSpec s = experiment_base();
  s.runs = 2000;
  s.planner.kind = PlannerKind::Spiral;
  s.planner.stop_after_first = true;
  const MetricsRow row = run_experiment(s, 0);
  const double ratio = row.success_rate > 0.0 ? row.success_rate_first / row.success_rate : 0.0;
  return {std::abs(ratio - 1.5) <= 0.1, fmt("ratio %.4f", ratio) + " over " + std::to_string(row.runs) + " runs"};
}

// 8. Same seed, different worker counts.
Verdict determinism() {
  ScenarioSpec s = experiment_base();
  s.runs = 12;
  const auto planners = standard_planners();
  const auto one = run_comparison(s, {10.0, 20.0}, planners, 1);
  const auto four = run_comparison(s, {10.0, 20.0}, planners, 4);
  const auto again = run_comparison(s, {10.0, 20.0}, planners, 3);
  std::ostringstream a, b, c;
  write_tables_csv(a, one);
  write_tables_csv(b, four);
  write_tables_csv(c, again);
  const bool ok = one == four && one == again && a.str() == b.str() && a.str() == c.str();
  return {ok, "workers 1/4/3, " + std::to_string(s.runs) + " runs x 5 planners x 2 distances"};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number, e.g. `sarsim_acceptance 1 4`.
  std::set<std::string> only(argv + 1, argv + argc);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1 transit times", transit_times},   {"2 filter vs dense Bayes", filter_correctness},
      {"3 diffusion variance", diffusion_scaling}, {"4 B&B vs exact oracle", bnb_vs_oracle},
      {"5 coverage", coverage},             {"6 planner/distance orderings", trend_orderings},
      {"7 stop-after-first ratio", first_ratio}, {"8 determinism across workers", determinism},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && !only.count(name.substr(0, name.find(' ')))) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failed;
    std::cout << (v.pass ? "PASS" : "FAIL") << "  criterion " << name << ": " << v.detail << fmt(" (%.1f s)", sec)
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
