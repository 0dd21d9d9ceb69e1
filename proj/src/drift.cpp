#include "sarsim/drift.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sarsim/errors.hpp"

namespace sarsim {

void DriftParams::validate() const {
  if (!(wind_leeway_factor >= 0.0 && wind_leeway_factor <= 0.1))
    throw ConfigError("drift: wind_leeway_factor must be in [0, 0.1]");
  if (!(diffusion_coeff >= 0.0) || !std::isfinite(diffusion_coeff))
    throw ConfigError("drift: diffusion_coeff must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("drift: dt must be > 0");
}

namespace {

bool same_grid(const VectorField& a, const VectorField& b) {
  return a.origin() == b.origin() && a.dx() == b.dx() && a.dy() == b.dy() && a.nx() == b.nx() &&
         a.ny() == b.ny() && a.nt() == b.nt() && a.frame_dt() == b.frame_dt();
}

// current + leeway * wind at time t on the shared node grid.
void blend_frame(const FieldPair& f, double t, double leeway, std::vector<Vec2>& out, bool& t_clamped) {
  const VectorField& c = f.current;
  const VectorField& w = f.wind;
  const double u = t / c.frame_dt();
  int k0 = 0;
  int k1 = 0;
  double ft = 0.0;
  t_clamped = false;
  if (!(u >= 0.0)) {
    t_clamped = true;
  } else if (u > c.nt() - 1) {
    t_clamped = true;
    k0 = k1 = c.nt() - 1;
  } else {
    k0 = static_cast<int>(std::floor(u));
    ft = u - k0;
    k1 = std::min(k0 + 1, c.nt() - 1);
  }
  out.resize(static_cast<std::size_t>(c.nx()) * c.ny());
  std::size_t n = 0;
  for (int ix = 0; ix < c.nx(); ++ix)
    for (int iy = 0; iy < c.ny(); ++iy, ++n) {
      Vec2 vc = c.node(k0, ix, iy);
      Vec2 vw = w.node(k0, ix, iy);
      if (ft > 0.0) {
        const Vec2 c1 = c.node(k1, ix, iy);
        const Vec2 w1 = w.node(k1, ix, iy);
        vc = Vec2{vc.x * (1 - ft) + c1.x * ft, vc.y * (1 - ft) + c1.y * ft};
        vw = Vec2{vw.x * (1 - ft) + w1.x * ft, vw.y * (1 - ft) + w1.y * ft};
      }
      out[n] = {vc.x + leeway * vw.x, vc.y + leeway * vw.y};
    }
}

}  // namespace

void drift_step(std::span<Vec2> positions, const FieldPair& fields, double t, const DriftParams& params,
                Rng& rng, DriftStats* stats) {
  const double noise_scale = std::sqrt(2.0 * params.diffusion_coeff * params.dt);
  StdNormal normal;
  std::uint64_t clamped = 0;

  const bool direct = positions.size() < 256 || !same_grid(fields.current, fields.wind);
  if (direct) {
    for (auto& p : positions) {
      const FieldSample c = fields.current.sample(p, t);
      const FieldSample w = fields.wind.sample(p, t);
      clamped += c.clamped + w.clamped;
      const double ex = normal(rng);
      const double ey = normal(rng);
      p.x += (c.velocity.x + params.wind_leeway_factor * w.velocity.x) * params.dt + noise_scale * ex;
      p.y += (c.velocity.y + params.wind_leeway_factor * w.velocity.y) * params.dt + noise_scale * ey;
    }
    if (stats) stats->clamped_samples += clamped;
    return;
  }

  thread_local std::vector<Vec2> frame;
  bool t_clamped = false;
  blend_frame(fields, t, params.wind_leeway_factor, frame, t_clamped);
  const VectorField& g = fields.current;
  const int nx = g.nx();
  const int ny = g.ny();
  const double ox = g.origin().x;
  const double oy = g.origin().y;
  const double inv_dx = 1.0 / g.dx();
  const double inv_dy = 1.0 / g.dy();
  const double umax = nx - 1;
  const double vmax = ny - 1;

  for (auto& p : positions) {
    double u = (p.x - ox) * inv_dx;
    double v = (p.y - oy) * inv_dy;
    bool out = t_clamped;
    if (!(u >= 0.0)) u = 0.0, out = true;
    if (u > umax) u = umax, out = true;
    if (!(v >= 0.0)) v = 0.0, out = true;
    if (v > vmax) v = vmax, out = true;
    const int i0 = static_cast<int>(u);
    const int j0 = static_cast<int>(v);
    const int i1 = std::min(i0 + 1, nx - 1);
    const int j1 = std::min(j0 + 1, ny - 1);
    const double fx = u - i0;
    const double fy = v - j0;
    const Vec2 a = frame[static_cast<std::size_t>(i0) * ny + j0];
    const Vec2 b = frame[static_cast<std::size_t>(i1) * ny + j0];
    const Vec2 c = frame[static_cast<std::size_t>(i0) * ny + j1];
    const Vec2 d = frame[static_cast<std::size_t>(i1) * ny + j1];
    const double vx = (a.x * (1 - fx) + b.x * fx) * (1 - fy) + (c.x * (1 - fx) + d.x * fx) * fy;
    const double vy = (a.y * (1 - fx) + b.y * fx) * (1 - fy) + (c.y * (1 - fx) + d.y * fx) * fy;
    clamped += out ? 2 : 0;
    const double ex = normal(rng);
    const double ey = normal(rng);
    p.x += vx * params.dt + noise_scale * ex;
    p.y += vy * params.dt + noise_scale * ey;
  }
  if (stats) stats->clamped_samples += clamped;
}

ParticleEnsemble init_ensemble(Vec2 center, std::size_t n, double sigma, Rng& rng, int target_id,
                               double epsilon) {
  if (n < 1) throw ConfigError("ensemble: particle count must be >= 1");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("ensemble: sigma must be >= 0");
  StdNormal normal;
  std::vector<Vec2> pts(n);
  for (auto& p : pts) {
    p.x = center.x + sigma * normal(rng);
    p.y = center.y + sigma * normal(rng);
  }
  return ParticleEnsemble(target_id, std::move(pts), epsilon);
}

TruthTarget sample_truth(Vec2 center, double sigma, Rng& rng) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("truth: sigma must be >= 0");
  StdNormal normal;
  const double ex = normal(rng);
  const double ey = normal(rng);
  return TruthTarget{{center.x + sigma * ex, center.y + sigma * ey}, std::nullopt};
}

}  // namespace sarsim
