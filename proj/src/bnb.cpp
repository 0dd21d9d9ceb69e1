#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>
#include <vector>

#include "sarsim/errors.hpp"
#include "sarsim/planners.hpp"

namespace sarsim {

void BnBConfig::validate() const {
  if (!(budget_s > 0.0)) throw ConfigError("bnb: budget must be > 0");
  if (horizon < 1) throw ConfigError("bnb: horizon must be >= 1");
  if (beam < 1) throw ConfigError("bnb: beam must be >= 1");
  if (vicinity_r < 1) throw ConfigError("bnb: vicinity_r must be >= 1");
  if (max_expansions < 1) throw ConfigError("bnb: max_expansions must be >= 1");
}

CellWeights bin_weights(const ParticleEnsemble& e, const Rect& area, const GridWorld& world) {
  CellWeights out(area);
  const auto pos = e.positions();
  const auto w = e.weights();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!e.alive(k)) continue;
    const auto c = world.cell_of(pos[k]);
    if (c && area.contains(*c)) out.at(*c) += w[k];
  }
  return out;
}

double path_value(const CellWeights& weights, Cell start, std::span<const Move> moves) {
  std::vector<std::uint8_t> seen(weights.w.size(), 0);
  Cell at = start;
  double v = weights.at(at);
  seen[weights.index(at)] = 1;
  for (Move m : moves) {
    at = step(at, m);
    if (!weights.area.contains(at)) throw ConfigError("path_value: path leaves the area");
    auto& s = seen[weights.index(at)];
    if (!s) v += weights.at(at);
    s = 1;
  }
  return v;
}

namespace {

// Memoized prefix sums of the largest cell weights in a Chebyshev window:
// top_sum(c, rho, t) = sum of the t largest weights within radius rho of c.
// Windows are keyed by their extent after clipping to the area, so large
// radii near the edges share one table.
class VicinityTable {
 public:
  VicinityTable(const CellWeights& w, int max_rho, int max_terms)
      : w_(w), max_terms_(max_terms), slot_(static_cast<std::size_t>(max_rho + 1) * w.w.size(), -1) {}

  double top_sum(Cell c, int rho, int terms) {
    if (rho <= 0 || terms <= 0) return 0.0;
    const std::size_t key = static_cast<std::size_t>(rho) * w_.w.size() + w_.index(c);
    if (slot_[key] < 0) slot_[key] = window(c, rho);
    const Entry& e = entries_[static_cast<std::size_t>(slot_[key])];
    return prefix_[e.begin + std::min<std::size_t>(static_cast<std::size_t>(terms), e.length - 1)];
  }

 private:
  struct Entry {
    std::size_t begin;
    std::size_t length;
  };

  std::int32_t window(Cell c, int rho) {
    const Rect& a = w_.area;
    const int i0 = std::max(a.i_min, c.i - rho), i1 = std::min(a.i_max, c.i + rho);
    const int j0 = std::max(a.j_min, c.j - rho), j1 = std::min(a.j_max, c.j + rho);
    const auto pack = [&](int v, int lo) { return static_cast<std::uint64_t>(v - lo); };
    const std::uint64_t id = pack(i0, a.i_min) | pack(i1, a.i_min) << 16 | pack(j0, a.j_min) << 32 |
                             pack(j1, a.j_min) << 48;
    const auto [it, fresh] = windows_.try_emplace(id, static_cast<std::int32_t>(entries_.size()));
    if (!fresh) return it->second;

    scratch_.clear();
    for (int i = i0; i <= i1; ++i)
      for (int j = j0; j <= j1; ++j) {
        const double v = w_.at({i, j});
        if (v > 0.0) scratch_.push_back(v);
      }
    const std::size_t keep = std::min<std::size_t>(scratch_.size(), static_cast<std::size_t>(max_terms_));
    std::partial_sort(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(keep), scratch_.end(),
                      std::greater<>());
    entries_.push_back({prefix_.size(), keep + 1});
    double s = 0.0;
    prefix_.push_back(0.0);
    for (std::size_t t = 0; t < keep; ++t) prefix_.push_back(s += scratch_[t]);
    return it->second;
  }

  const CellWeights& w_;
  int max_terms_;
  std::vector<std::int32_t> slot_;
  std::unordered_map<std::uint64_t, std::int32_t> windows_;
  std::vector<Entry> entries_;
  std::vector<double> prefix_;
  std::vector<double> scratch_;
};

struct Node {
  std::int32_t parent;
  Cell cell;
  std::int32_t depth;
  Move move;
  double g;
};

struct FrontierKey {
  double bound;
  double g;
  std::uint64_t seq;
  std::int32_t node;

  // True when *this ranks ahead of o (higher bound, then higher g, then older).
  bool before(const FrontierKey& o) const {
    if (bound != o.bound) return bound > o.bound;
    if (g != o.g) return g > o.g;
    return seq < o.seq;
  }
};

// Best-first frontier capped at `cap` entries. Two heaps over the same keys
// with lazy deletion: one pops the best, the other evicts the worst.
class Frontier {
 public:
  explicit Frontier(std::size_t cap) : cap_(cap) {}

  bool empty() const { return live_ == 0; }

  void push(const FrontierKey& k) {
    if (k.node >= static_cast<std::int32_t>(dead_.size())) dead_.resize(static_cast<std::size_t>(k.node) + 1, 0);
    best_.push_back(k);
    std::push_heap(best_.begin(), best_.end(), worse_first);
    worst_.push_back(k);
    std::push_heap(worst_.begin(), worst_.end(), better_first);
    ++live_;
    if (live_ > cap_) {
      for (;;) {
        std::pop_heap(worst_.begin(), worst_.end(), better_first);
        const FrontierKey w = worst_.back();
        worst_.pop_back();
        if (dead_[w.node]) continue;
        dead_[w.node] = 1;
        --live_;
        break;
      }
    }
  }

  FrontierKey pop() {
    for (;;) {
      std::pop_heap(best_.begin(), best_.end(), worse_first);
      const FrontierKey b = best_.back();
      best_.pop_back();
      if (dead_[b.node]) continue;
      dead_[b.node] = 1;
      --live_;
      return b;
    }
  }

 private:
  static bool worse_first(const FrontierKey& a, const FrontierKey& b) { return b.before(a); }
  static bool better_first(const FrontierKey& a, const FrontierKey& b) { return a.before(b); }

  std::size_t cap_;
  std::size_t live_ = 0;
  std::vector<FrontierKey> best_;
  std::vector<FrontierKey> worst_;
  std::vector<std::uint8_t> dead_;
};

std::vector<Move> unwind(const std::vector<Node>& pool, std::int32_t id) {
  std::vector<Move> moves;
  for (; pool[id].parent >= 0; id = pool[id].parent) moves.push_back(pool[id].move);
  std::reverse(moves.begin(), moves.end());
  return moves;
}

}  // namespace

PathResult bnb_search(const CellWeights& weights, Cell start, const BnBConfig& cfg) {
  cfg.validate();
  const Rect& area = weights.area;
  if (!area.contains(start)) throw ConfigError("bnb_search: start cell outside search area");

  const int horizon = cfg.horizon;
  VicinityTable table(weights, std::min(cfg.vicinity_r, horizon), horizon);
  auto bound_of = [&](const Node& n) {
    const int remaining = horizon - n.depth;
    return n.g + table.top_sum(n.cell, std::min(cfg.vicinity_r, remaining), remaining);
  };
  auto on_path = [](const std::vector<Node>& pool, std::int32_t id, Cell c) {
    for (; id >= 0; id = pool[id].parent)
      if (pool[id].cell == c) return true;
    return false;
  };

  std::vector<Node> pool;
  pool.push_back({-1, start, 0, Move::East, weights.at(start)});
  std::int32_t best = 0;
  double best_g = pool[0].g;

  Frontier frontier(cfg.beam);
  std::uint64_t seq = 0;
  frontier.push({bound_of(pool[0]), pool[0].g, seq++, 0});

  PathResult res;
  while (!frontier.empty() && res.expansions < cfg.max_expansions) {
    const FrontierKey top = frontier.pop();
    // Ordered by bound, so nothing left can beat the incumbent.
    if (top.bound <= best_g) break;
    ++res.expansions;

    const std::int32_t id = top.node;
    const Node parent = pool[id];
    for (Move m : kMoveOrder) {
      const Cell c = step(parent.cell, m);
      if (!area.contains(c)) continue;
      const double gain = on_path(pool, id, c) ? 0.0 : weights.at(c);
      Node child{id, c, parent.depth + 1, m, parent.g + gain};
      pool.push_back(child);
      const auto cid = static_cast<std::int32_t>(pool.size() - 1);
      if (child.g > best_g) {
        best_g = child.g;
        best = cid;
      }
      if (child.depth >= horizon) continue;
      const double b = bound_of(child);
      if (b <= best_g) continue;
      frontier.push({b, child.g, seq++, cid});
    }
  }

  res.moves = unwind(pool, best);
  res.value = best_g;
  return res;
}

PathResult exact_oracle(const CellWeights& weights, Cell start, int horizon) {
  if (weights.area.area() > 64) throw ConfigError("exact_oracle: area exceeds 64 cells");
  if (horizon < 0 || horizon > 12) throw ConfigError("exact_oracle: horizon must be in [0, 12]");
  if (!weights.area.contains(start)) throw ConfigError("exact_oracle: start cell outside area");

  std::vector<int> visits(weights.w.size(), 0);
  std::vector<Move> path;
  PathResult best;
  visits[weights.index(start)] = 1;
  best.value = weights.at(start);

  std::function<void(Cell, double)> dfs = [&](Cell at, double value) {
    ++best.expansions;
    if (value > best.value) {
      best.value = value;
      best.moves = path;
    }
    if (static_cast<int>(path.size()) == horizon) return;
    for (Move m : kMoveOrder) {
      const Cell c = step(at, m);
      if (!weights.area.contains(c)) continue;
      int& v = visits[weights.index(c)];
      const double gain = v == 0 ? weights.at(c) : 0.0;
      ++v;
      path.push_back(m);
      dfs(c, value + gain);
      path.pop_back();
      --v;
    }
  };
  dfs(start, best.value);
  return best;
}

BnBPlanner::BnBPlanner(BnBConfig cfg, double eta) : cfg_(cfg), eta_(eta) {
  cfg_.validate();
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("bnb: eta must be in (0, 1)");
}

std::string BnBPlanner::name() const {
  return "B&B " + std::to_string(static_cast<int>(std::lround(cfg_.budget_s / 60.0)));
}

PlannerCommand BnBPlanner::decide(const PlannerObservation& obs) {
  std::optional<int> k;
  for (;;) {
    k = queue_.current(obs);
    if (!k) return PlannerCommand::hold(obs.uav);
    if (*k != target_) {
      target_ = *k;
      search_started_at_.reset();
    }
    if (search_started_at_ && obs.time - *search_started_at_ >= cfg_.budget_s - 1e-9) {
      queue_.abandon_current();
      target_ = -1;
      continue;
    }
    break;
  }

  const GridWorld& world = *obs.world;
  const ParticleEnsemble& ens = obs.ensembles[*k];
  // UpdateSearchAreas: the rectangle tracks the drifting cloud every tick.
  const Rect rect = containment_rect(ens, eta_, world);
  if (!rect.contains(obs.uav)) return {step_toward(obs.uav, rect.nearest_cell(obs.uav))};

  if (!search_started_at_) search_started_at_ = obs.time;
  const Rect area = rect.expanded(1).clipped_to(world);
  const CellWeights w = bin_weights(ens, area, world);
  const PathResult res = bnb_search(w, obs.uav, cfg_);
  if (!res.moves.empty()) return {step(obs.uav, res.moves.front())};

  // Nothing collectible within the horizon: head for the nearest cell with mass.
  std::optional<Cell> nearest;
  for (int i = area.i_min; i <= area.i_max; ++i)
    for (int j = area.j_min; j <= area.j_max; ++j) {
      const Cell c{i, j};
      if (c == obs.uav || w.at(c) <= 0.0) continue;
      if (!nearest || manhattan(c, obs.uav) < manhattan(*nearest, obs.uav)) nearest = c;
    }
  if (nearest) return {step_toward(obs.uav, *nearest)};
  for (Move m : kMoveOrder) {
    const Cell c = step(obs.uav, m);
    if (area.contains(c)) return {c};
  }
  return PlannerCommand::hold(obs.uav);
}

}  // namespace sarsim
