#include "sarsim/errors.hpp"
#include "sarsim/planners.hpp"

namespace sarsim {

std::vector<Cell> boustrophedon_sweep(const Rect& rect, Cell corner) {
  const bool at_i = corner.i == rect.i_min || corner.i == rect.i_max;
  const bool at_j = corner.j == rect.j_min || corner.j == rect.j_max;
  if (!at_i || !at_j) throw ConfigError("boustrophedon_sweep: entry cell is not a rectangle corner");

  const int di = corner.i == rect.i_min ? 1 : -1;
  const int dj = corner.j == rect.j_min ? 1 : -1;
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(rect.area()));
  int dir = di;
  for (int r = 0; r < rect.height(); ++r) {
    const int j = corner.j + r * dj;
    const int first = dir > 0 ? rect.i_min : rect.i_max;
    for (int c = 0; c < rect.width(); ++c) out.push_back({first + c * dir, j});
    dir = -dir;
  }
  return out;
}

Cell nearest_corner(const Rect& rect, Cell from) {
  const Cell corners[4] = {{rect.i_min, rect.j_min}, {rect.i_max, rect.j_min}, {rect.i_min, rect.j_max},
                           {rect.i_max, rect.j_max}};
  Cell best = corners[0];
  for (const Cell& c : corners)
    if (manhattan(c, from) < manhattan(best, from)) best = c;
  return best;
}

BoustrophedonPlanner::BoustrophedonPlanner(double eta) : eta_(eta) {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("boustrophedon: eta must be in (0, 1)");
}

PlannerCommand BoustrophedonPlanner::start_sweep(const Rect& rect, Cell uav) {
  sweep_ = boustrophedon_sweep(rect, uav);
  sweep_pos_ = 0;
  sweeping_ = true;
  ++sweeps_;
  if (sweep_.size() < 2) return PlannerCommand::hold(uav);
  sweep_pos_ = 1;
  return {sweep_[1]};
}

PlannerCommand BoustrophedonPlanner::decide(const PlannerObservation& obs) {
  const auto k = queue_.current(obs);
  if (!k) return PlannerCommand::hold(obs.uav);
  if (*k != target_) {
    target_ = *k;
    sweeping_ = false;
  }

  if (sweeping_) {
    if (sweep_pos_ + 1 < sweep_.size()) return {sweep_[++sweep_pos_]};
    sweeping_ = false;
  }

  // Transit, or a finished sweep: the cloud has drifted, so place a fresh rectangle.
  const Rect rect = containment_rect(obs.ensembles[*k], eta_, *obs.world);
  const Cell goal = nearest_corner(rect, obs.uav);
  if (obs.uav != goal) return {step_toward(obs.uav, goal)};
  return start_sweep(rect, obs.uav);
}

}  // namespace sarsim
