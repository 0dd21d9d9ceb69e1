#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sarsim/environment.hpp"
#include "sarsim/geometry.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

/// Weighted particle cloud for one target. N is fixed at construction; erased
/// particles stay in their slot with weight 0 so index-addressed noise streams
/// remain aligned.
class ParticleEnsemble {
 public:
  ParticleEnsemble() = default;
  /// Uniform weights 1/N. Throws ConfigError if `positions` is empty or epsilon is outside [0, 1).
  ParticleEnsemble(int target_id, std::vector<Vec2> positions, double epsilon = 0.0);

  int target_id() const { return target_id_; }
  double epsilon() const { return epsilon_; }
  std::size_t size() const { return positions_.size(); }
  std::size_t alive_count() const { return alive_count_; }
  bool exhausted() const { return alive_count_ == 0; }

  std::span<const Vec2> positions() const { return positions_; }
  /// Mutable positions for the drift step. Weights and liveness are not touched.
  std::span<Vec2> positions_mut() { return positions_; }
  std::span<const double> weights() const { return weights_; }
  bool alive(std::size_t k) const { return alive_[k] != 0; }

  double alive_weight_sum() const;

 private:
  friend struct BeliefOps;

  int target_id_ = 0;
  double epsilon_ = 0.0;
  std::vector<Vec2> positions_;
  std::vector<double> weights_;
  std::vector<std::uint8_t> alive_;
  std::size_t alive_count_ = 0;
};

/// Cell-space rectangle, bounds inclusive.
struct Rect {
  int i_min = 0;
  int i_max = 0;
  int j_min = 0;
  int j_max = 0;

  int width() const { return i_max - i_min + 1; }
  int height() const { return j_max - j_min + 1; }
  int area() const { return width() * height(); }
  bool contains(Cell c) const { return c.i >= i_min && c.i <= i_max && c.j >= j_min && c.j <= j_max; }
  Rect expanded(int margin) const { return {i_min - margin, i_max + margin, j_min - margin, j_max + margin}; }
  Rect clipped_to(const GridWorld& world) const;
  /// Rect cell closest (Manhattan) to `c`.
  Cell nearest_cell(Cell c) const;
  bool operator==(const Rect&) const = default;
};

struct UpdateResult {
  std::size_t in_cell = 0;  // alive particles found in the observed cell
  bool exhausted = false;
};

/// Negative measurement (target not seen) in `observed`. In-cell weights are
/// scaled by epsilon, the rest by 1 - epsilon, then renormalized. With
/// epsilon == 0 the in-cell particles are erased.
UpdateResult negative_update(ParticleEnsemble& ensemble, Cell observed, const GridWorld& world);

inline double effective_sample_size(const ParticleEnsemble& e) {
  double s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    if (e.alive(k)) s += e.weights()[k] * e.weights()[k];
  return s > 0.0 ? 1.0 / s : 0.0;
}

/// Systematic resampling to N equal weights when ESS < N/2. Returns true if it resampled.
bool maybe_resample(ParticleEnsemble& ensemble, Rng& rng);

/// Weighted mean of alive particles. Throws BeliefExhausted when none are alive.
Vec2 center_of_gravity(const ParticleEnsemble& ensemble);

/// Smallest symmetric per-axis quantile rectangle holding at least `eta` of the
/// alive weight. Throws BeliefExhausted when none are alive, ConfigError for eta
/// outside (0, 1).
Rect containment_rect(const ParticleEnsemble& ensemble, double eta, const GridWorld& world);

/// Alive weight whose particles fall inside `rect`.
double weight_in_rect(const ParticleEnsemble& ensemble, const Rect& rect, const GridWorld& world);

}  // namespace sarsim
