#include "sarsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sarsim/errors.hpp"

namespace sarsim {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::AllFound: return "all-found";
    case Termination::EnduranceExhausted: return "endurance-exhausted";
    case Termination::BeliefExhausted: return "belief-exhausted";
    case Termination::PlannerDone: return "planner-done";
  }
  return "?";
}

Termination parse_termination(const std::string& s) {
  for (auto t : {Termination::AllFound, Termination::EnduranceExhausted, Termination::BeliefExhausted,
                 Termination::PlannerDone})
    if (to_string(t) == s) return t;
  throw ConfigError("unknown termination reason '" + s + "'");
}

int RunRecord::found_count() const {
  return static_cast<int>(std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return o.found; }));
}

std::optional<double> RunRecord::first_detection_time() const {
  std::optional<double> t;
  for (const auto& d : detections)
    if (!t || d.time < *t) t = d.time;
  return t;
}

void SimConfig::validate() const {
  if (!(uav.speed > 0.0) || !std::isfinite(uav.speed)) throw ConfigError("uav: speed must be > 0");
  if (!(uav.endurance_s > 0.0) || !std::isfinite(uav.endurance_s)) throw ConfigError("uav: endurance must be > 0");
  const double expected = tick_for(grid, uav);
  if (!(std::abs(tick_dt - expected) <= 1e-9 * expected))
    throw ConfigError("tick_dt " + std::to_string(tick_dt) + " s does not match cell_size/speed = " +
                      std::to_string(expected) + " s");
  if (!fields) throw ConfigError("no fields attached");
  const double t_end = max_ticks() * tick_dt;
  if (!fields->current.covers(grid.extent_min(), grid.extent_max(), t_end))
    throw ConfigError("current field does not cover the grid extent and endurance");
  if (!fields->wind.covers(grid.extent_min(), grid.extent_max(), t_end))
    throw ConfigError("wind field does not cover the grid extent and endurance");
  if (!grid.cell_of(takeoff)) throw ConfigError("take-off point is outside the grid");
  if (targets.empty()) throw ConfigError("no targets");
  if (targets.size() > 8) throw ConfigError("at most 8 targets are supported");
  for (const auto& t : targets)
    if (!grid.cell_of(t.center)) throw ConfigError("target center outside the grid");
  if (particles < 1) throw ConfigError("belief: particles must be >= 1");
  if (!(sigma_init_m >= 0.0)) throw ConfigError("belief: sigma_init_m must be >= 0");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("belief: epsilon must be in [0, 1)");
  if (truth_mode == TruthMode::SharedParticle && epsilon != 0.0)
    throw ConfigError("shared-particle truth mode requires epsilon = 0");
  DriftParams d = drift;
  d.dt = tick_dt;
  d.validate();
  if (!(planner.eta > 0.0 && planner.eta < 1.0)) throw ConfigError("planner: eta must be in (0, 1)");
  if (planner.kind == PlannerKind::BnB) planner.bnb.validate();
}

int SimConfig::max_ticks() const { return static_cast<int>(std::floor(uav.endurance_s / tick_dt + 1e-9)); }

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  cfg_.drift.dt = cfg_.tick_dt;
  planner_ = make_planner(cfg_.planner);
  max_ticks_ = cfg_.max_ticks();

  const std::size_t n = cfg_.targets.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto id = static_cast<int>(k);
    Rng init = make_rng(cfg_.seed, Stream::EnsembleInit, k);
    ensembles_.push_back(init_ensemble(cfg_.targets[k].center, cfg_.particles, cfg_.sigma_init_m, init, id, cfg_.epsilon));
    if (cfg_.truth_mode == TruthMode::SharedParticle) {
      truths_.push_back(TruthTarget{ensembles_.back().positions()[0], std::nullopt});
    } else {
      Rng truth_init = make_rng(cfg_.seed, Stream::TruthInit, k);
      truths_.push_back(sample_truth(cfg_.targets[k].center, cfg_.sigma_init_m, truth_init));
    }
    ensemble_rngs_.push_back(make_rng(cfg_.seed, Stream::EnsembleDrift, k));
    truth_rngs_.push_back(make_rng(cfg_.seed, Stream::TruthDrift, k));
  }
  resample_rng_ = make_rng(cfg_.seed, Stream::Resample);
  found_.assign(n, 0);

  uav_.cell = *cfg_.grid.cell_of(cfg_.takeoff);
  uav_.position = cfg_.grid.center_of(uav_.cell);
  uav_.speed = cfg_.uav.speed;
  uav_.endurance_remaining = cfg_.uav.endurance_s;

  record_.outcomes.assign(n, {});
  record_.seed = cfg_.seed;
  record_.planner = planner_->name();
  check_termination();
}

PlannerObservation Simulation::observation() const {
  PlannerObservation obs;
  obs.uav = uav_.cell;
  obs.time = time();
  obs.world = &cfg_.grid;
  obs.ensembles = ensembles_;
  obs.found = found_;
  obs.current_cell_observed = tick_ > 0;
  return obs;
}

bool Simulation::check_termination() {
  if (finished_) return true;
  const bool all_found = std::all_of(found_.begin(), found_.end(), [](auto f) { return f != 0; });
  bool all_lost = true;
  for (std::size_t k = 0; k < found_.size(); ++k)
    if (!found_[k] && !ensembles_[k].exhausted()) all_lost = false;

  if (all_found)
    record_.termination = Termination::AllFound;
  else if (all_lost)
    record_.termination = Termination::BeliefExhausted;
  else if (planner_->done())
    record_.termination = Termination::PlannerDone;
  else if (tick_ >= max_ticks_)
    record_.termination = Termination::EnduranceExhausted;
  else
    return false;
  finished_ = true;
  record_.clamped_samples = drift_stats_.clamped_samples;
  return true;
}

std::vector<int> Simulation::observe_cell(Cell cell, double t) {
  std::vector<int> hits;
  for (std::size_t k = 0; k < truths_.size(); ++k) {
    if (found_[k]) continue;
    const auto c = cfg_.grid.cell_of(truths_[k].position);
    if (c && *c == cell) {
      found_[k] = 1;
      truths_[k].mark_found(t);
      record_.outcomes[k] = {true, t};
      record_.detections.push_back({static_cast<int>(k), tick_, t});
      hits.push_back(static_cast<int>(k));
    }
  }
  for (std::size_t k = 0; k < ensembles_.size(); ++k) {
    if (found_[k] || ensembles_[k].exhausted()) continue;
    const UpdateResult r = negative_update(ensembles_[k], cell, cfg_.grid);
    if (cfg_.epsilon == 0.0)
      record_.erased_particles += r.in_cell;
    else
      maybe_resample(ensembles_[k], resample_rng_);
  }
  return hits;
}

bool Simulation::step() {
  if (check_termination()) return false;

  const double t = time();
  for (std::size_t k = 0; k < ensembles_.size(); ++k) {
    if (found_[k]) continue;  // found targets freeze
    if (!ensembles_[k].exhausted())
      drift_step(ensembles_[k].positions_mut(), *cfg_.fields, t, cfg_.drift, ensemble_rngs_[k], &drift_stats_);
    if (cfg_.truth_mode == TruthMode::SharedParticle)
      truths_[k].position = ensembles_[k].positions()[0];
    else
      drift_step(std::span<Vec2>(&truths_[k].position, 1), *cfg_.fields, t, cfg_.drift, truth_rngs_[k], &drift_stats_);
  }

  const PlannerCommand cmd = planner_->plan(observation());
  if (!is_legal(cmd, uav_.cell, cfg_.grid))
    throw std::logic_error(planner_->name() + " issued an illegal move");
  uav_.cell = cmd.next;
  uav_.position = cfg_.grid.center_of(uav_.cell);

  ++tick_;
  const double now = time();
  uav_.endurance_remaining = cfg_.uav.endurance_s - now;

  const auto hits = observe_cell(uav_.cell, now);
  for (int k : hits) planner_->notify_found(k);

  if (cfg_.record_trace) {
    TickRecord rec;
    rec.tick = tick_;
    rec.time = now;
    rec.uav = uav_.cell;
    rec.found = hits;
    for (const auto& e : ensembles_) rec.alive.push_back(static_cast<std::uint32_t>(e.alive_count()));
    record_.trace.push_back(std::move(rec));
  }
  record_.ticks = tick_;
  record_.end_time = now;
  return !check_termination();
}

RunRecord run_simulation(const SimConfig& cfg) {
  Simulation sim(cfg);
  while (sim.step()) {
  }
  return sim.take_record();
}

}  // namespace sarsim
