#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sarsim/belief.hpp"
#include "sarsim/drift.hpp"
#include "sarsim/environment.hpp"
#include "sarsim/planners.hpp"
#include "sarsim/rng.hpp"

namespace sarsim {

struct UavSpec {
  double speed = 18.0;         // m/s ground speed
  double endurance_s = 7200.0;
};

struct UavState {
  Vec2 position;
  double speed = 18.0;
  double endurance_remaining = 0.0;
  Cell cell;
};

/// How a truth target's diffusion noise relates to its ensemble.
enum class TruthMode {
  Independent,     // own Gaussian draw at t=0 and its own noise stream
  SharedParticle,  // rides on particle 0 of its ensemble (sanity mode)
};

struct TargetSpec {
  Vec2 center;  // mean of the initial belief
};

struct SimConfig {
  GridWorld grid{{0.0, 0.0}, 100.0, 1, 1};
  Vec2 takeoff;
  std::shared_ptr<const FieldPair> fields;
  DriftParams drift;
  PlannerSpec planner;
  UavSpec uav;
  std::vector<TargetSpec> targets;
  std::size_t particles = 10'000;
  double sigma_init_m = 1000.0;
  double epsilon = 0.0;
  double tick_dt = 100.0 / 18.0;
  std::uint64_t seed = 0;
  TruthMode truth_mode = TruthMode::Independent;
  bool record_trace = true;

  /// Throws ConfigError on any inconsistency (dt mismatch, field coverage, ...).
  void validate() const;
  int max_ticks() const;
};

/// Planner-independent per-tick time step for a grid and UAV: one cell per tick.
inline double tick_for(const GridWorld& grid, const UavSpec& uav) { return grid.cell_size() / uav.speed; }

struct TickRecord {
  int tick = 0;
  double time = 0.0;
  Cell uav;
  std::vector<int> found;             // targets detected this tick
  std::vector<std::uint32_t> alive;   // alive particles per target after the update
};

struct Detection {
  int target = 0;
  int tick = 0;
  double time = 0.0;
};

struct TargetOutcome {
  bool found = false;
  std::optional<double> detection_time;
};

enum class Termination { AllFound, EnduranceExhausted, BeliefExhausted, PlannerDone };
std::string to_string(Termination t);
Termination parse_termination(const std::string& s);

struct RunRecord {
  std::vector<TickRecord> trace;  // empty unless SimConfig::record_trace
  std::vector<Detection> detections;
  std::vector<TargetOutcome> outcomes;
  Termination termination = Termination::EnduranceExhausted;
  int ticks = 0;
  double end_time = 0.0;
  std::uint64_t clamped_samples = 0;
  std::uint64_t erased_particles = 0;
  std::uint64_t seed = 0;
  std::string planner;

  int target_count() const { return static_cast<int>(outcomes.size()); }
  int found_count() const;
  /// Earliest detection time, if any target was found.
  std::optional<double> first_detection_time() const;
};

/// Step-wise simulation. run_simulation() drives it to completion; tools that
/// need intermediate state (plots) use it directly.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  /// Advances one tick. Returns false once the run has terminated.
  bool step();
  bool finished() const { return finished_; }

  const SimConfig& config() const { return cfg_; }
  const UavState& uav() const { return uav_; }
  const std::vector<ParticleEnsemble>& ensembles() const { return ensembles_; }
  const std::vector<TruthTarget>& truths() const { return truths_; }
  const RunRecord& record() const { return record_; }
  RunRecord take_record() { return std::move(record_); }
  int tick() const { return tick_; }
  double time() const { return tick_ * cfg_.tick_dt; }

  /// Detection check plus negative update for every unfound target.
  /// Returns the targets detected in `cell`.
  std::vector<int> observe_cell(Cell cell, double t);

 private:
  bool check_termination();
  PlannerObservation observation() const;

  SimConfig cfg_;
  std::unique_ptr<Planner> planner_;
  std::vector<ParticleEnsemble> ensembles_;
  std::vector<TruthTarget> truths_;
  std::vector<Rng> ensemble_rngs_;
  std::vector<Rng> truth_rngs_;
  Rng resample_rng_;
  std::vector<std::uint8_t> found_;
  UavState uav_;
  DriftStats drift_stats_;
  RunRecord record_;
  int tick_ = 0;
  int max_ticks_ = 0;
  bool finished_ = false;
};

RunRecord run_simulation(const SimConfig& cfg);

}  // namespace sarsim
