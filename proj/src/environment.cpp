#include "sarsim/environment.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sarsim/errors.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

GridWorld::GridWorld(Vec2 origin, double cell_size, int nx, int ny)
    : origin_(origin), cell_size_(cell_size), nx_(nx), ny_(ny) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) throw ConfigError("grid: cell_size must be > 0");
  if (nx < 1 || ny < 1) throw ConfigError("grid: nx and ny must be >= 1");
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) throw ConfigError("grid: origin must be finite");
}

std::optional<Cell> GridWorld::cell_of(Vec2 p) const {
  const double fx = std::floor((p.x - origin_.x) / cell_size_);
  const double fy = std::floor((p.y - origin_.y) / cell_size_);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < nx_ && fy < ny_)) return std::nullopt;
  return Cell{static_cast<int>(fx), static_cast<int>(fy)};
}

Cell GridWorld::clamped_cell_of(Vec2 p) const {
  const double fx = std::floor((p.x - origin_.x) / cell_size_);
  const double fy = std::floor((p.y - origin_.y) / cell_size_);
  return {static_cast<int>(std::clamp(fx, 0.0, static_cast<double>(nx_ - 1))),
          static_cast<int>(std::clamp(fy, 0.0, static_cast<double>(ny_ - 1)))};
}

Vec2 GridWorld::center_of(Cell c) const {
  return {origin_.x + (c.i + 0.5) * cell_size_, origin_.y + (c.j + 0.5) * cell_size_};
}

VectorField::VectorField(Vec2 origin, double dx, double dy, double frame_dt, int nt, int nx, int ny,
                         std::vector<Vec2> frames)
    : origin_(origin), dx_(dx), dy_(dy), frame_dt_(frame_dt), nt_(nt), nx_(nx), ny_(ny),
      frames_(std::move(frames)) {
  if (nt < 1 || nx < 1 || ny < 1) throw ConfigError("field: need at least one frame and one node per axis");
  if (!(dx > 0.0) || !(dy > 0.0) || !(frame_dt > 0.0)) throw ConfigError("field: spacings must be > 0");
  if (frames_.size() != static_cast<std::size_t>(nt) * nx * ny)
    throw ConfigError("field: frame data size " + std::to_string(frames_.size()) + " does not match " +
                      std::to_string(nt) + "x" + std::to_string(nx) + "x" + std::to_string(ny));
  for (const auto& v : frames_)
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw ConfigError("field: non-finite velocity");
}

VectorField VectorField::constant(Vec2 v, Vec2 lo, Vec2 hi, double duration) {
  const double w = std::max(hi.x - lo.x, 1.0);
  const double h = std::max(hi.y - lo.y, 1.0);
  const double d = std::max(duration, 1.0);
  return VectorField(lo, w, h, d, 2, 2, 2, std::vector<Vec2>(8, v));
}

namespace {

// Fractional node coordinate along one axis, clamped to [0, n-1].
struct AxisPos {
  int i0;
  int i1;
  double f;
  bool clamped;
};

AxisPos locate(double u, int n) {
  AxisPos a{0, 0, 0.0, false};
  if (!(u >= 0.0)) {
    a.clamped = true;
    return a;
  }
  if (u > n - 1) {
    a.clamped = true;
    a.i0 = a.i1 = n - 1;
    return a;
  }
  const double fl = std::floor(u);
  a.i0 = static_cast<int>(fl);
  a.f = u - fl;
  a.i1 = std::min(a.i0 + 1, n - 1);
  return a;
}

}  // namespace

FieldSample VectorField::sample(Vec2 p, double t) const {
  const AxisPos ax = locate((p.x - origin_.x) / dx_, nx_);
  const AxisPos ay = locate((p.y - origin_.y) / dy_, ny_);
  const AxisPos at = locate(t / frame_dt_, nt_);

  auto spatial = [&](int k) {
    const Vec2 v00 = frames_[index(k, ax.i0, ay.i0)];
    const Vec2 v10 = frames_[index(k, ax.i1, ay.i0)];
    const Vec2 v01 = frames_[index(k, ax.i0, ay.i1)];
    const Vec2 v11 = frames_[index(k, ax.i1, ay.i1)];
    const double wx = ax.f;
    const double wy = ay.f;
    const Vec2 lo = v00 + (v10 - v00) * wx;
    const Vec2 hi = v01 + (v11 - v01) * wx;
    return lo + (hi - lo) * wy;
  };

  Vec2 v = spatial(at.i0);
  if (at.f > 0.0) {
    const Vec2 w = spatial(at.i1);
    v = v + (w - v) * at.f;
  }
  return {v, ax.clamped || ay.clamped || at.clamped};
}

bool VectorField::covers(Vec2 lo, Vec2 hi, double t_end) const {
  const Vec2 a = extent_min();
  const Vec2 b = extent_max();
  return a.x <= lo.x && a.y <= lo.y && b.x >= hi.x && b.y >= hi.y && duration() >= t_end;
}

double VectorField::max_magnitude() const {
  double m = 0.0;
  for (const auto& v : frames_) m = std::max(m, v.norm());
  return m;
}

void SyntheticFieldParams::validate() const {
  auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string("fields: ") + name + " must be >= 0");
  };
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("fields: ") + name + " must be > 0");
  };
  if (gyres < 0) throw ConfigError("fields: gyres must be >= 0");
  nonneg(background_max, "background_max");
  nonneg(current_max, "current_max");
  nonneg(wind_max, "wind_max");
  nonneg(wind_mean_min, "wind_mean_min");
  nonneg(wind_noise, "wind_noise");
  nonneg(wind_veer_amplitude_deg, "wind_veer_amplitude_deg");
  positive(gyre_radius_min, "gyre_radius_min");
  positive(gyre_radius_max, "gyre_radius_max");
  positive(gyre_orbit_period, "gyre_orbit_period");
  positive(wind_veer_period, "wind_veer_period");
  positive(spacing, "spacing");
  positive(frame_dt, "frame_dt");
  if (gyre_radius_max < gyre_radius_min) throw ConfigError("fields: gyre_radius_max < gyre_radius_min");
}

namespace {

struct Gyre {
  Vec2 mean_center;
  double orbit_radius;
  double phase;
  double radius;
  double strength;  // signed; |strength| * exp(-1/2) is the peak swirl speed
};

}  // namespace

FieldPair generate_synthetic_fields(std::uint64_t seed, Vec2 lo, Vec2 hi, double duration,
                                    const SyntheticFieldParams& params) {
  params.validate();
  if (!(duration > 0.0)) throw ConfigError("fields: duration must be > 0");
  if (!(hi.x >= lo.x && hi.y >= lo.y)) throw ConfigError("fields: empty extent");

  const int nx = static_cast<int>(std::ceil((hi.x - lo.x) / params.spacing)) + 1;
  const int ny = static_cast<int>(std::ceil((hi.y - lo.y) / params.spacing)) + 1;
  const int nt = static_cast<int>(std::ceil(duration / params.frame_dt)) + 1;
  const std::size_t count = static_cast<std::size_t>(nt) * nx * ny;

  Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(Stream::Fields)}));
  auto unit = [](Rng& r) { return uniform01(r); };
  StdNormal normal;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;

  std::vector<Gyre> gyres;
  gyres.reserve(params.gyres);
  for (int g = 0; g < params.gyres; ++g) {
    Gyre gy;
    gy.mean_center = {lo.x + unit(rng) * (hi.x - lo.x), lo.y + unit(rng) * (hi.y - lo.y)};
    gy.radius = params.gyre_radius_min + unit(rng) * (params.gyre_radius_max - params.gyre_radius_min);
    gy.orbit_radius = 0.5 * gy.radius * unit(rng);
    gy.phase = kTwoPi * unit(rng);
    const double peak = params.current_max * (0.3 + 0.7 * unit(rng));
    gy.strength = (unit(rng) < 0.5 ? -1.0 : 1.0) * peak * std::exp(0.5);
    gyres.push_back(gy);
  }
  const double bg_speed = params.background_max * unit(rng);
  const double bg_dir = kTwoPi * unit(rng);
  const Vec2 background{bg_speed * std::cos(bg_dir), bg_speed * std::sin(bg_dir)};

  const double wind_hi = params.wind_max;
  const double wind_lo = std::min(params.wind_mean_min, wind_hi);
  const double wind_speed = wind_lo + unit(rng) * (wind_hi - wind_lo);
  const double wind_dir0 = kTwoPi * unit(rng);
  const double veer_phase = kTwoPi * unit(rng);
  const double veer_amp = params.wind_veer_amplitude_deg * std::numbers::pi / 180.0;

  std::vector<Vec2> noise(static_cast<std::size_t>(nx) * ny);
  for (auto& n : noise) {
    n.x = params.wind_noise * normal(rng);
    n.y = params.wind_noise * normal(rng);
  }

  std::vector<Vec2> current(count);
  std::vector<Vec2> wind(count);
  for (int k = 0; k < nt; ++k) {
    const double t = k * params.frame_dt;
    const double dir = wind_dir0 + veer_amp * std::sin(kTwoPi * t / params.wind_veer_period + veer_phase);
    const Vec2 wind_base{wind_speed * std::cos(dir), wind_speed * std::sin(dir)};
    for (int ix = 0; ix < nx; ++ix) {
      for (int iy = 0; iy < ny; ++iy) {
        const Vec2 p{lo.x + ix * params.spacing, lo.y + iy * params.spacing};
        Vec2 u = background;
        for (const auto& g : gyres) {
          const double a = g.phase + kTwoPi * t / params.gyre_orbit_period;
          const Vec2 c = g.mean_center + Vec2{std::cos(a), std::sin(a)} * g.orbit_radius;
          const Vec2 d = p - c;
          const double e = std::exp(-(d.x * d.x + d.y * d.y) / (2.0 * g.radius * g.radius));
          u += Vec2{g.strength * d.y / g.radius * e, -g.strength * d.x / g.radius * e};
        }
        const std::size_t idx = (static_cast<std::size_t>(k) * nx + ix) * ny + iy;
        current[idx] = u;

        Vec2 w = wind_base + noise[static_cast<std::size_t>(ix) * ny + iy];
        const double wn = w.norm();
        if (wn > wind_hi) w = wn > 0.0 ? w * (wind_hi / wn) : Vec2{};
        wind[idx] = w;
      }
    }
  }

  double cmax = 0.0;
  for (const auto& v : current) cmax = std::max(cmax, v.norm());
  if (cmax > params.current_max) {
    const double s = params.current_max / cmax;
    for (auto& v : current) {
      v = v * s;
      // Rounding can leave a node a hair above the cap.
      const double n = v.norm();
      if (n > params.current_max) v = v * (params.current_max / n);
    }
  }

  FieldPair out{VectorField(lo, params.spacing, params.spacing, params.frame_dt, nt, nx, ny, std::move(current)),
                VectorField(lo, params.spacing, params.spacing, params.frame_dt, nt, nx, ny, std::move(wind))};
  return out;
}

}  // namespace sarsim
