#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sarsim/drift.hpp"
#include "sarsim/errors.hpp"

using namespace sarsim;

namespace {

FieldPair constant_pair(Vec2 current, Vec2 wind, double extent = 1e6, double duration = 1e5) {
  const Vec2 lo{-extent, -extent}, hi{extent, extent};
  return {VectorField::constant(current, lo, hi, duration), VectorField::constant(wind, lo, hi, duration)};
}

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace

TEST_SUITE("drift") {
  TEST_CASE("advection with leeway, no diffusion") {
    const FieldPair f = constant_pair({1.0, 0.0}, {10.0, 0.0});
    DriftParams p;
    p.wind_leeway_factor = 0.03;
    p.diffusion_coeff = 0.0;
    p.dt = 60.0;
    Rng rng(1);
    std::vector<Vec2> pts{{0.0, 0.0}};
    drift_step(pts, f, 0.0, p, rng);
    CHECK(pts[0].x == doctest::Approx(78.0).epsilon(1e-12));
    CHECK(pts[0].y == doctest::Approx(0.0));
  }

  TEST_CASE("null dynamics leaves positions unchanged") {
    const FieldPair f = constant_pair({0.0, 0.0}, {0.0, 0.0});
    DriftParams p;
    p.diffusion_coeff = 0.0;
    Rng rng(2);
    std::vector<Vec2> pts(1000, Vec2{12.5, -7.0});
    drift_step(pts, f, 0.0, p, rng);
    for (const auto& q : pts) CHECK(q == Vec2{12.5, -7.0});
  }

  TEST_CASE("diffusion variance matches 2 D dt") {
    const FieldPair f = constant_pair({0.0, 0.0}, {0.0, 0.0});
    DriftParams p;
    p.diffusion_coeff = 1.0;
    p.dt = 100.0;
    Rng rng(3);
    std::vector<Vec2> pts(100'000, Vec2{0.0, 0.0});
    drift_step(pts, f, 0.0, p, rng);
    std::vector<double> xs, ys;
    for (const auto& q : pts) {
      xs.push_back(q.x);
      ys.push_back(q.y);
    }
    CHECK(variance(xs) == doctest::Approx(200.0).epsilon(0.05));
    CHECK(variance(ys) == doctest::Approx(200.0).epsilon(0.05));
  }

  TEST_CASE("batched drift agrees with per-point sampling") {
    SyntheticFieldParams sp;
    sp.gyres = 30;
    sp.spacing = 2000.0;
    const FieldPair f = generate_synthetic_fields(17, {-50000, -50000}, {50000, 50000}, 10800.0, sp);
    DriftParams p;
    p.diffusion_coeff = 5.0;
    Rng init(4);
    StdNormal n0;
    std::vector<Vec2> pts(2000);
    for (auto& q : pts) q = {20000.0 * n0(init), 20000.0 * n0(init)};
    pts[7] = {-60000.0, 0.0};  // outside the field: clamped
    std::vector<Vec2> ref = pts;

    Rng a(9), b(9);
    DriftStats stats;
    const double t = 4000.0;
    drift_step(pts, f, t, p, a, &stats);

    StdNormal normal;
    std::uint64_t clamped = 0;
    const double s = std::sqrt(2.0 * p.diffusion_coeff * p.dt);
    for (auto& q : ref) {
      const FieldSample c = f.current.sample(q, t);
      const FieldSample w = f.wind.sample(q, t);
      clamped += c.clamped + w.clamped;
      const double ex = normal(b);
      const double ey = normal(b);
      q.x += (c.velocity.x + p.wind_leeway_factor * w.velocity.x) * p.dt + s * ex;
      q.y += (c.velocity.y + p.wind_leeway_factor * w.velocity.y) * p.dt + s * ey;
    }
    for (std::size_t k = 0; k < pts.size(); ++k) {
      CHECK(pts[k].x == doctest::Approx(ref[k].x).epsilon(1e-12));
      CHECK(pts[k].y == doctest::Approx(ref[k].y).epsilon(1e-12));
    }
    CHECK(stats.clamped_samples == clamped);
    CHECK(clamped >= 2);
  }

  TEST_CASE("noise draws depend only on the number of points") {
    const FieldPair f = constant_pair({0.1, 0.0}, {0.0, 0.0});
    DriftParams p;
    Rng a(5), b(5);
    std::vector<Vec2> x(300, Vec2{0, 0}), y(300, Vec2{5000, -3000});
    drift_step(x, f, 0.0, p, a);
    drift_step(y, f, 0.0, p, b);
    CHECK(a == b);
    for (std::size_t k = 0; k < x.size(); ++k) CHECK(y[k].x - x[k].x == doctest::Approx(5000.0));
  }

  TEST_CASE("initial ensemble is an isotropic Gaussian") {
    Rng rng(6);
    const ParticleEnsemble e = init_ensemble({1000.0, -2000.0}, 10'000, 1000.0, rng, 3);
    CHECK(e.size() == 10'000);
    CHECK(e.target_id() == 3);
    std::size_t inside = 0;
    for (const auto& q : e.positions())
      if (distance(q, {1000.0, -2000.0}) <= 2000.0) ++inside;
    CHECK(static_cast<double>(inside) / 10'000 == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(0.02 / 0.865));
    for (double w : e.weights()) CHECK(w == doctest::Approx(1e-4));
  }

  TEST_CASE("truth draws: Rayleigh mean distance and degenerate sigma") {
    Rng rng(7);
    double sum = 0.0;
    for (int k = 0; k < 1000; ++k) sum += distance(sample_truth({0, 0}, 800.0, rng).position, {0, 0});
    CHECK(sum / 1000 == doctest::Approx(800.0 * std::sqrt(std::numbers::pi / 2)).epsilon(0.05));
    CHECK(sample_truth({4.0, 5.0}, 0.0, rng).position == Vec2{4.0, 5.0});
  }

  TEST_CASE("first detection time wins") {
    TruthTarget t{{0, 0}, std::nullopt};
    t.mark_found(10.0);
    t.mark_found(5.0);
    CHECK(*t.found_at == 10.0);
  }

  TEST_CASE("parameter validation") {
    DriftParams p;
    p.wind_leeway_factor = 0.2;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.diffusion_coeff = -1.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    p = {};
    p.dt = 0.0;
    CHECK_THROWS_AS(p.validate(), ConfigError);
    Rng rng(1);
    CHECK_THROWS_AS(init_ensemble({0, 0}, 0, 1.0, rng), ConfigError);
  }
}
