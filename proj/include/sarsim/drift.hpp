#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "sarsim/belief.hpp"
#include "sarsim/environment.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

struct DriftParams {
  double wind_leeway_factor = 0.03;
  double diffusion_coeff = 1.0;  // m^2/s
  double dt = 100.0 / 18.0;      // s

  void validate() const;
};

struct DriftStats {
  std::uint64_t clamped_samples = 0;
};

/// One Euler-Maruyama step:
///   p' = p + (current(p,t) + leeway * wind(p,t)) * dt + sqrt(2 D dt) * eta
/// eta is drawn for every position in order (x then y), so the draws consumed
/// depend only on positions.size().
void drift_step(std::span<Vec2> positions, const FieldPair& fields, double t, const DriftParams& params,
                Rng& rng, DriftStats* stats = nullptr);

/// N i.i.d. isotropic Gaussian particles around `center`, weights 1/N.
ParticleEnsemble init_ensemble(Vec2 center, std::size_t n, double sigma, Rng& rng, int target_id = 0,
                               double epsilon = 0.0);

struct TruthTarget {
  Vec2 position;
  std::optional<double> found_at;

  bool found() const { return found_at.has_value(); }
  /// First call wins; later calls are ignored.
  void mark_found(double t) {
    if (!found_at) found_at = t;
  }
};

/// True target drawn from the same Gaussian as its ensemble.
TruthTarget sample_truth(Vec2 center, double sigma, Rng& rng);

}  // namespace sarsim
