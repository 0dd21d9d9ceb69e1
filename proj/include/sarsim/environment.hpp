#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "sarsim/geometry.hpp"

namespace sarsim {

/// Discrete search grid laid over the planar frame. Cell (i, j) covers
/// [origin.x + i*cell_size, origin.x + (i+1)*cell_size) and likewise in y.
class GridWorld {
 public:
  GridWorld(Vec2 origin, double cell_size, int nx, int ny);

  Vec2 origin() const { return origin_; }
  double cell_size() const { return cell_size_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

  /// Floor-convention lookup; std::nullopt outside the extent.
  std::optional<Cell> cell_of(Vec2 p) const;
  /// Like cell_of but clamps to the nearest valid cell.
  Cell clamped_cell_of(Vec2 p) const;
  Vec2 center_of(Cell c) const;
  bool contains(Cell c) const { return c.i >= 0 && c.j >= 0 && c.i < nx_ && c.j < ny_; }

  Vec2 extent_min() const { return origin_; }
  Vec2 extent_max() const { return {origin_.x + cell_size_ * nx_, origin_.y + cell_size_ * ny_}; }

  bool operator==(const GridWorld&) const = default;

 private:
  Vec2 origin_;
  double cell_size_;
  int nx_;
  int ny_;
};

/// Result of a field lookup. `clamped` is set when the query fell outside the
/// field's spatial or temporal coverage and was pulled onto the boundary.
struct FieldSample {
  Vec2 velocity;
  bool clamped = false;
};

/// Time-varying 2-D velocity field on a regular node grid. Node (ix, iy) sits at
/// origin + (ix*dx, iy*dy); frame k at time k*frame_dt. Immutable after construction.
class VectorField {
 public:
  VectorField() = default;
  /// `frames` is row-major (time, x, y): index ((k*nx)+ix)*ny+iy.
  VectorField(Vec2 origin, double dx, double dy, double frame_dt, int nt, int nx, int ny,
              std::vector<Vec2> frames);

  /// Uniform field of `v` covering [lo, hi] over [0, duration].
  static VectorField constant(Vec2 v, Vec2 lo, Vec2 hi, double duration);

  FieldSample sample(Vec2 p, double t) const;
  Vec2 node(int k, int ix, int iy) const { return frames_[index(k, ix, iy)]; }

  Vec2 origin() const { return origin_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double frame_dt() const { return frame_dt_; }
  int nt() const { return nt_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double duration() const { return frame_dt_ * (nt_ - 1); }
  Vec2 extent_min() const { return origin_; }
  Vec2 extent_max() const { return {origin_.x + dx_ * (nx_ - 1), origin_.y + dy_ * (ny_ - 1)}; }
  const std::vector<Vec2>& frames() const { return frames_; }

  /// True when the field covers the rectangle [lo, hi] and times [0, t_end].
  bool covers(Vec2 lo, Vec2 hi, double t_end) const;
  double max_magnitude() const;

  bool operator==(const VectorField&) const = default;

 private:
  std::size_t index(int k, int ix, int iy) const {
    return (static_cast<std::size_t>(k) * nx_ + ix) * ny_ + iy;
  }

  Vec2 origin_{};
  double dx_ = 1.0;
  double dy_ = 1.0;
  double frame_dt_ = 1.0;
  int nt_ = 0;
  int nx_ = 0;
  int ny_ = 0;
  std::vector<Vec2> frames_;
};

struct FieldPair {
  VectorField current;
  VectorField wind;

  bool operator==(const FieldPair&) const = default;
};

/// Knobs for the synthetic generator. Magnitudes in m/s, lengths in m, times in s.
struct SyntheticFieldParams {
  int gyres = 4;
  double gyre_radius_min = 4'000.0;
  double gyre_radius_max = 12'000.0;
  double gyre_orbit_period = 86'400.0;
  double background_max = 0.3;
  double current_max = 1.0;
  double wind_max = 12.0;
  double wind_mean_min = 3.0;
  double wind_veer_amplitude_deg = 30.0;
  double wind_veer_period = 43'200.0;
  double wind_noise = 1.0;
  double spacing = 5'000.0;
  double frame_dt = 3'600.0;

  /// Throws ConfigError on negative magnitudes or non-positive spacings.
  void validate() const;
};

/// Deterministic in `seed`. Covers at least [lo, hi] x [0, duration].
FieldPair generate_synthetic_fields(std::uint64_t seed, Vec2 lo, Vec2 hi, double duration,
                                    const SyntheticFieldParams& params = {});

}  // namespace sarsim
