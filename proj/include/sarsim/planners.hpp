#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sarsim/belief.hpp"
#include "sarsim/environment.hpp"
#include "sarsim/geometry.hpp"

namespace sarsim {

/// What a planner sees at the start of a tick.
struct PlannerObservation {
  Cell uav;
  double time = 0.0;
  const GridWorld* world = nullptr;
  std::span<const ParticleEnsemble> ensembles;
  std::span<const std::uint8_t> found;
  /// False only at take-off, before the UAV has surveyed its own cell.
  bool current_cell_observed = true;
};

/// Next cell to occupy: a 4-neighbour of the current cell, or the current cell (hold).
struct PlannerCommand {
  Cell next;

  static PlannerCommand hold(Cell c) { return {c}; }
  bool is_hold(Cell from) const { return next == from; }
};

inline bool is_legal(const PlannerCommand& cmd, Cell from, const GridWorld& world) {
  return world.contains(cmd.next) && manhattan(cmd.next, from) <= 1;
}

class Planner {
 public:
  virtual ~Planner() = default;

  /// Surveys the take-off cell first when any unfound target has belief mass
  /// there, otherwise defers to decide().
  PlannerCommand plan(const PlannerObservation& obs);
  /// True once the planner has nothing left to search for.
  virtual bool done() const { return false; }
  /// Called by the engine for every detection, after the tick's observation.
  virtual void notify_found(int /*target*/) {}
  virtual std::string name() const = 0;

 protected:
  virtual PlannerCommand decide(const PlannerObservation& obs) = 0;
};

/// Brute force over all n! visiting orders (n <= 8) of the open path
/// start -> c[pi(0)] -> ... ; ties go to the lexicographically smallest
/// permutation. Throws ConfigError for n > 8 or n == 0.
std::vector<int> order_targets(Vec2 start, std::span<const Vec2> centers);

/// One 4-connected step from `from` toward `goal`, moving along the axis with
/// the larger remaining offset (x on ties). Returns `from` when already there.
Cell step_toward(Cell from, Cell goal);

/// Visit order shared by all planners: fixed once from the initial centers of
/// gravity, then skips found, exhausted and abandoned targets.
class TargetQueue {
 public:
  std::optional<int> current(const PlannerObservation& obs);
  void abandon_current() { ++pos_; }
  bool finished() const { return initialized_ && pos_ >= order_.size(); }
  const std::vector<int>& order() const { return order_; }

 private:
  bool initialized_ = false;
  std::vector<int> order_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Expanding square spiral.

/// Offsets of the outward square spiral: (0,0), then runs of 1,1,2,2,3,3,...
/// cells cycling East, North, West, South.
class SquareSpiral {
 public:
  Cell offset() const { return pos_; }
  void advance();
  std::size_t index() const { return index_; }

 private:
  Cell pos_{0, 0};
  int dir_ = 0;
  int run_length_ = 1;
  int run_done_ = 0;
  int runs_at_length_ = 0;
  std::size_t index_ = 0;
};

class SpiralPlanner : public Planner {
 public:
  bool done() const override { return queue_.finished(); }
  std::string name() const override { return "Spiral"; }

 protected:
  PlannerCommand decide(const PlannerObservation& obs) override;

 private:
  enum class Phase { Transit, Search };

  TargetQueue queue_;
  int target_ = -1;
  Phase phase_ = Phase::Transit;
  Cell anchor_{};
  SquareSpiral spiral_;
};

// ---------------------------------------------------------------------------
// Boustrophedon rectangles.

/// Lawnmower order over `rect` starting at one of its corners: rows along x,
/// reversing direction on each row. Throws ConfigError if `corner` is not a corner.
std::vector<Cell> boustrophedon_sweep(const Rect& rect, Cell corner);

/// Corner of `rect` with the smallest Manhattan distance to `from`
/// (ties: (min,min), (max,min), (min,max), (max,max)).
Cell nearest_corner(const Rect& rect, Cell from);

class BoustrophedonPlanner : public Planner {
 public:
  explicit BoustrophedonPlanner(double eta = 0.75);

  bool done() const override { return queue_.finished(); }
  std::string name() const override { return "Boustrophedon"; }
  std::size_t sweeps_started() const { return sweeps_; }

 protected:
  PlannerCommand decide(const PlannerObservation& obs) override;

 private:
  PlannerCommand start_sweep(const Rect& rect, Cell uav);

  double eta_;
  TargetQueue queue_;
  int target_ = -1;
  bool sweeping_ = false;
  std::vector<Cell> sweep_;
  std::size_t sweep_pos_ = 0;
  std::size_t sweeps_ = 0;
};

// ---------------------------------------------------------------------------
// Global-local branch and bound.

struct BnBConfig {
  double budget_s = 50.0 * 60.0;  // SEARCH time per target
  int horizon = 20;
  std::size_t beam = 512;
  int vicinity_r = 20;
  std::size_t max_expansions = 2000;

  static constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();
  void validate() const;
};

/// Per-cell weights over a rectangle, stored column-major by x: (i - i_min) * height + (j - j_min).
struct CellWeights {
  Rect area;
  std::vector<double> w;

  CellWeights() = default;
  explicit CellWeights(const Rect& r) : area(r), w(static_cast<std::size_t>(r.area()), 0.0) {}
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.i - area.i_min) * area.height() + (c.j - area.j_min);
  }
  double at(Cell c) const { return w[index(c)]; }
  double& at(Cell c) { return w[index(c)]; }
};

/// Bins the alive weight of `ensemble` into the cells of `area`.
CellWeights bin_weights(const ParticleEnsemble& ensemble, const Rect& area, const GridWorld& world);

struct PathResult {
  std::vector<Move> moves;
  /// Total weight of distinct cells on the path, the start cell included.
  double value = 0.0;
  std::size_t expansions = 0;
};

/// Best-first branch and bound over depth-`horizon` sequences of moves inside
/// `weights.area`. Node value g = weight of distinct cells visited so far;
/// bound = g + sum of the top-m cell weights within Chebyshev radius
/// min(vicinity_r, m) of the node, m = remaining depth. With vicinity_r >=
/// horizon the window holds every reachable cell. Prunes on bound <= best
/// g and keeps at most `beam` frontier nodes.
PathResult bnb_search(const CellWeights& weights, Cell start, const BnBConfig& cfg);

/// Exhaustive enumeration of all move sequences of length `horizon` inside the
/// area. Refuses (ConfigError) areas over 64 cells or horizon over 12.
PathResult exact_oracle(const CellWeights& weights, Cell start, int horizon);

/// Collected weight of a move sequence, revisits counted once, start included.
double path_value(const CellWeights& weights, Cell start, std::span<const Move> moves);

class BnBPlanner : public Planner {
 public:
  BnBPlanner(BnBConfig cfg, double eta = 0.75);

  bool done() const override { return queue_.finished(); }
  std::string name() const override;
  const BnBConfig& config() const { return cfg_; }

 protected:
  PlannerCommand decide(const PlannerObservation& obs) override;

 private:
  BnBConfig cfg_;
  double eta_;
  TargetQueue queue_;
  int target_ = -1;
  std::optional<double> search_started_at_;
};

// ---------------------------------------------------------------------------
// Test and harness planners.

/// Never moves.
class HoldPlanner : public Planner {
 public:
  std::string name() const override { return "Hold"; }

 protected:
  PlannerCommand decide(const PlannerObservation& obs) override { return PlannerCommand::hold(obs.uav); }
};

/// Wraps another planner and reports done() after the first detection.
class StopAfterFirstFind : public Planner {
 public:
  explicit StopAfterFirstFind(std::unique_ptr<Planner> inner) : inner_(std::move(inner)) {}

  bool done() const override { return any_found_ || inner_->done(); }
  void notify_found(int target) override {
    any_found_ = true;
    inner_->notify_found(target);
  }
  std::string name() const override { return inner_->name() + " (stop after first)"; }

 protected:
  PlannerCommand decide(const PlannerObservation& obs) override { return inner_->plan(obs); }

 private:
  std::unique_ptr<Planner> inner_;
  bool any_found_ = false;
};

enum class PlannerKind { Spiral, Boustrophedon, BnB, Hold };

struct PlannerSpec {
  PlannerKind kind = PlannerKind::Spiral;
  double eta = 0.75;
  BnBConfig bnb;
  bool stop_after_first = false;

  std::string label() const;
};

std::unique_ptr<Planner> make_planner(const PlannerSpec& spec);
PlannerKind parse_planner_kind(const std::string& s);
std::string to_string(PlannerKind k);

}  // namespace sarsim
