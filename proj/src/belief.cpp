#include "sarsim/belief.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sarsim/errors.hpp"

namespace sarsim {

ParticleEnsemble::ParticleEnsemble(int target_id, std::vector<Vec2> positions, double epsilon)
    : target_id_(target_id), epsilon_(epsilon), positions_(std::move(positions)) {
  if (positions_.empty()) throw ConfigError("ensemble: need at least one particle");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("ensemble: epsilon must be in [0, 1)");
  weights_.assign(positions_.size(), 1.0 / static_cast<double>(positions_.size()));
  alive_.assign(positions_.size(), 1);
  alive_count_ = positions_.size();
}

double ParticleEnsemble::alive_weight_sum() const {
  double s = 0.0;
  for (std::size_t k = 0; k < size(); ++k)
    if (alive_[k]) s += weights_[k];
  return s;
}

Rect Rect::clipped_to(const GridWorld& world) const {
  return {std::clamp(i_min, 0, world.nx() - 1), std::clamp(i_max, 0, world.nx() - 1),
          std::clamp(j_min, 0, world.ny() - 1), std::clamp(j_max, 0, world.ny() - 1)};
}

Cell Rect::nearest_cell(Cell c) const {
  return {std::clamp(c.i, i_min, i_max), std::clamp(c.j, j_min, j_max)};
}

struct BeliefOps {
  static UpdateResult negative_update(ParticleEnsemble& e, Cell observed, const GridWorld& world) {
    UpdateResult res;
    if (e.exhausted()) {
      res.exhausted = true;
      return res;
    }
    // Bounding box of the observed cell, padded so the exact floor test below
    // decides the boundary cases.
    const double cs = world.cell_size();
    const double x0 = world.origin().x + observed.i * cs - 1e-6 * cs;
    const double x1 = world.origin().x + (observed.i + 1) * cs + 1e-6 * cs;
    const double y0 = world.origin().y + observed.j * cs - 1e-6 * cs;
    const double y1 = world.origin().y + (observed.j + 1) * cs + 1e-6 * cs;

    thread_local std::vector<std::size_t> hits;
    hits.clear();
    const std::size_t n = e.size();
    const Vec2* pos = e.positions_.data();
    const std::uint8_t* alive = e.alive_.data();
    for (std::size_t k = 0; k < n; ++k) {
      const Vec2 p = pos[k];
      const bool near = (p.x >= x0) & (p.x < x1) & (p.y >= y0) & (p.y < y1) & (alive[k] != 0);
      if (!near) continue;
      const auto c = world.cell_of(p);
      if (c && *c == observed) hits.push_back(k);
    }
    res.in_cell = hits.size();
    if (hits.empty()) return res;

    if (e.epsilon_ == 0.0) {
      for (auto k : hits) {
        e.alive_[k] = 0;
        e.weights_[k] = 0.0;
      }
      e.alive_count_ -= hits.size();
    } else {
      // Eq. likelihoods: epsilon inside the cell, 1 - epsilon outside.
      const double in = e.epsilon_;
      const double out = 1.0 - e.epsilon_;
      std::size_t h = 0;
      for (std::size_t k = 0; k < e.size(); ++k) {
        if (!e.alive_[k]) continue;
        const bool hit = h < hits.size() && hits[h] == k;
        h += hit;
        e.weights_[k] *= hit ? in : out;
      }
    }

    if (e.alive_count_ == 0) {
      res.exhausted = true;
      return res;
    }
    const double total = e.alive_weight_sum();
    if (!(total > 0.0)) {
      std::fill(e.alive_.begin(), e.alive_.end(), 0);
      std::fill(e.weights_.begin(), e.weights_.end(), 0.0);
      e.alive_count_ = 0;
      res.exhausted = true;
      return res;
    }
    const double inv = 1.0 / total;
    for (std::size_t k = 0; k < e.size(); ++k)
      if (e.alive_[k]) e.weights_[k] *= inv;
    return res;
  }

  static bool maybe_resample(ParticleEnsemble& e, Rng& rng) {
    if (e.exhausted()) return false;
    const std::size_t n = e.size();
    if (effective_sample_size(e) >= 0.5 * static_cast<double>(n)) return false;

    std::vector<Vec2> out(n);
    const double step = 1.0 / static_cast<double>(n);
    double u = uniform01(rng) * step;
    std::size_t src = 0;
    double cum = e.alive_[0] ? e.weights_[0] : 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      while (u > cum && src + 1 < n) {
        ++src;
        if (e.alive_[src]) cum += e.weights_[src];
      }
      // Skip over dead tail slots that the rounding guard may land on.
      std::size_t pick = src;
      while (!e.alive_[pick] && pick > 0) --pick;
      out[m] = e.positions_[pick];
      u += step;
    }
    e.positions_ = std::move(out);
    std::fill(e.weights_.begin(), e.weights_.end(), step);
    std::fill(e.alive_.begin(), e.alive_.end(), 1);
    e.alive_count_ = n;
    return true;
  }
};

UpdateResult negative_update(ParticleEnsemble& ensemble, Cell observed, const GridWorld& world) {
  return BeliefOps::negative_update(ensemble, observed, world);
}

bool maybe_resample(ParticleEnsemble& ensemble, Rng& rng) { return BeliefOps::maybe_resample(ensemble, rng); }

Vec2 center_of_gravity(const ParticleEnsemble& e) {
  if (e.exhausted()) throw BeliefExhausted("center_of_gravity: ensemble " + std::to_string(e.target_id()) + " is exhausted");
  double sx = 0.0;
  double sy = 0.0;
  double sw = 0.0;
  const auto pos = e.positions();
  const auto w = e.weights();
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!e.alive(k)) continue;
    sx += w[k] * pos[k].x;
    sy += w[k] * pos[k].y;
    sw += w[k];
  }
  return {sx / sw, sy / sw};
}

double weight_in_rect(const ParticleEnsemble& e, const Rect& rect, const GridWorld& world) {
  double s = 0.0;
  for (std::size_t k = 0; k < e.size(); ++k)
    if (e.alive(k) && rect.contains(world.clamped_cell_of(e.positions()[k]))) s += e.weights()[k];
  return s;
}

namespace {

// Smallest index whose cumulative weight exceeds (strict) or reaches `level`.
int quantile_index(const std::vector<double>& cum, double level, bool strict) {
  const auto it = strict ? std::upper_bound(cum.begin(), cum.end(), level)
                         : std::lower_bound(cum.begin(), cum.end(), level);
  if (it == cum.end()) return static_cast<int>(cum.size()) - 1;
  return static_cast<int>(it - cum.begin());
}

}  // namespace

Rect containment_rect(const ParticleEnsemble& e, double eta, const GridWorld& world) {
  if (!(eta > 0.0 && eta < 1.0)) throw ConfigError("containment_rect: eta must be in (0, 1)");
  if (e.exhausted()) throw BeliefExhausted("containment_rect: ensemble " + std::to_string(e.target_id()) + " is exhausted");

  const auto pos = e.positions();
  const auto wts = e.weights();
  thread_local std::vector<Cell> cells;
  thread_local std::vector<double> cw;
  cells.clear();
  cw.clear();
  int i0 = world.nx(), i1 = -1, j0 = world.ny(), j1 = -1;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (!e.alive(k)) continue;
    const Cell c = world.clamped_cell_of(pos[k]);
    cells.push_back(c);
    cw.push_back(wts[k]);
    i0 = std::min(i0, c.i);
    i1 = std::max(i1, c.i);
    j0 = std::min(j0, c.j);
    j1 = std::max(j1, c.j);
  }
  const int w = i1 - i0 + 1;
  const int h = j1 - j0 + 1;
  const Rect bbox{i0, i1, j0, j1};

  std::vector<double> col(w, 0.0), row(h, 0.0);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    col[cells[k].i - i0] += cw[k];
    row[cells[k].j - j0] += cw[k];
  }
  std::partial_sum(col.begin(), col.end(), col.begin());
  std::partial_sum(row.begin(), row.end(), row.begin());
  const double total_x = col.back();
  const double total_y = row.back();

  // Summed-area table when the box is small enough, direct summation otherwise.
  const std::size_t box = static_cast<std::size_t>(w) * h;
  const bool use_sat = box <= std::max<std::size_t>(4 * cells.size(), 1u << 16);
  std::vector<double> sat;
  if (use_sat) {
    sat.assign(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
    auto at = [&](int x, int y) -> double& { return sat[static_cast<std::size_t>(x) * (h + 1) + y]; };
    for (std::size_t k = 0; k < cells.size(); ++k) at(cells[k].i - i0 + 1, cells[k].j - j0 + 1) += cw[k];
    for (int x = 1; x <= w; ++x)
      for (int y = 1; y <= h; ++y) at(x, y) += at(x - 1, y) + at(x, y - 1) - at(x - 1, y - 1);
  }
  auto contained = [&](const Rect& r) {
    if (r.i_max < r.i_min || r.j_max < r.j_min) return 0.0;
    if (use_sat) {
      auto at = [&](int x, int y) { return sat[static_cast<std::size_t>(x) * (h + 1) + y]; };
      const int a = r.i_min - i0, b = r.i_max - i0 + 1, c = r.j_min - j0, d = r.j_max - j0 + 1;
      return at(b, d) - at(a, d) - at(b, c) + at(a, c);
    }
    double s = 0.0;
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (r.contains(cells[k])) s += cw[k];
    return s;
  };
  auto rect_at = [&](double s) {
    const double lo = 0.5 * (1.0 - s);
    const double hi = 0.5 * (1.0 + s);
    return Rect{i0 + quantile_index(col, lo * total_x, true), i0 + quantile_index(col, hi * total_x, false),
                j0 + quantile_index(row, lo * total_y, true), j0 + quantile_index(row, hi * total_y, false)};
  };

  const double need = eta * total_x;
  double lo = 0.0;
  double hi = 1.0;
  if (contained(rect_at(0.0)) >= need) return rect_at(0.0);
  for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (contained(rect_at(mid)) >= need)
      hi = mid;
    else
      lo = mid;
  }
  if (hi >= 1.0) return bbox;
  const Rect r = rect_at(hi);
  return contained(r) >= need ? r : bbox;
}

}  // namespace sarsim
