#include <algorithm>

#include "sarsim/planners.hpp"

namespace sarsim {

void SquareSpiral::advance() {
  pos_ = step(pos_, kMoveOrder[dir_]);
  ++index_;
  if (++run_done_ == run_length_) {
    run_done_ = 0;
    dir_ = (dir_ + 1) % 4;
    if (++runs_at_length_ == 2) {
      runs_at_length_ = 0;
      ++run_length_;
    }
  }
}

PlannerCommand SpiralPlanner::decide(const PlannerObservation& obs) {
  const auto k = queue_.current(obs);
  if (!k) return PlannerCommand::hold(obs.uav);
  if (*k != target_) {
    target_ = *k;
    phase_ = Phase::Transit;
  }

  const GridWorld& world = *obs.world;
  if (phase_ == Phase::Transit) {
    // The goal follows the drifting cloud every tick.
    const Cell goal = world.clamped_cell_of(center_of_gravity(obs.ensembles[*k]));
    if (obs.uav != goal) return {step_toward(obs.uav, goal)};
    phase_ = Phase::Search;
    anchor_ = obs.uav;
    spiral_ = SquareSpiral{};
  }

  const auto side = static_cast<std::size_t>(2 * std::max(world.nx(), world.ny()) + 1);
  auto desired = [&] { return Cell{anchor_.i + spiral_.offset().i, anchor_.j + spiral_.offset().j}; };
  while (desired() == obs.uav || !world.contains(desired())) {
    spiral_.advance();
    // The spiral has left the grid on every side; start over from the anchor.
    if (spiral_.index() > side * side) spiral_ = SquareSpiral{};
  }
  return {step_toward(obs.uav, desired())};
}

}  // namespace sarsim
