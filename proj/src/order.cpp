#include <algorithm>
#include <limits>
#include <string>
#include <cstdlib>
#include <numeric>

#include "sarsim/errors.hpp"
#include "sarsim/planners.hpp"

namespace sarsim {

std::vector<int> order_targets(Vec2 start, std::span<const Vec2> centers) {
  const std::size_t n = centers.size();
  if (n == 0) throw ConfigError("order_targets: no targets");
  if (n > 8) throw ConfigError("order_targets: refusing " + std::to_string(n) + " targets (max 8)");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_len = std::numeric_limits<double>::infinity();
  do {
    double len = 0.0;
    Vec2 at = start;
    for (int k : perm) {
      len += distance(at, centers[k]);
      at = centers[k];
    }
    // next_permutation walks in lexicographic order, so strict < keeps the
    // smallest permutation among ties.
    if (len < best_len) {
      best_len = len;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Cell step_toward(Cell from, Cell goal) {
  const int dx = goal.i - from.i;
  const int dy = goal.j - from.j;
  if (dx == 0 && dy == 0) return from;
  if (std::abs(dx) >= std::abs(dy)) return {from.i + (dx > 0 ? 1 : -1), from.j};
  return {from.i, from.j + (dy > 0 ? 1 : -1)};
}

std::optional<int> TargetQueue::current(const PlannerObservation& obs) {
  if (!initialized_) {
    initialized_ = true;
    std::vector<int> ids;
    std::vector<Vec2> centers;
    for (std::size_t k = 0; k < obs.ensembles.size(); ++k) {
      if (obs.found[k] || obs.ensembles[k].exhausted()) continue;
      ids.push_back(static_cast<int>(k));
      centers.push_back(center_of_gravity(obs.ensembles[k]));
    }
    if (!ids.empty()) {
      for (int k : order_targets(obs.world->center_of(obs.uav), centers)) order_.push_back(ids[k]);
    }
  }
  while (pos_ < order_.size()) {
    const int k = order_[pos_];
    if (!obs.found[k] && !obs.ensembles[k].exhausted()) return k;
    ++pos_;
  }
  return std::nullopt;
}

}  // namespace sarsim
