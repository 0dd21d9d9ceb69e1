#include <stdexcept>

#include "sarsim/errors.hpp"
#include "sarsim/planners.hpp"

namespace sarsim {

PlannerCommand Planner::plan(const PlannerObservation& obs) {
  if (!obs.current_cell_observed) {
    for (std::size_t k = 0; k < obs.ensembles.size(); ++k) {
      if (obs.found[k]) continue;
      const auto& e = obs.ensembles[k];
      for (std::size_t p = 0; p < e.size(); ++p) {
        if (!e.alive(p)) continue;
        const auto c = obs.world->cell_of(e.positions()[p]);
        if (c && *c == obs.uav) return PlannerCommand::hold(obs.uav);
      }
    }
  }
  return decide(obs);
}

std::string to_string(PlannerKind k) {
  switch (k) {
    case PlannerKind::Spiral: return "spiral";
    case PlannerKind::Boustrophedon: return "boustrophedon";
    case PlannerKind::BnB: return "bnb";
    case PlannerKind::Hold: return "hold";
  }
  return "?";
}

PlannerKind parse_planner_kind(const std::string& s) {
  if (s == "spiral") return PlannerKind::Spiral;
  if (s == "boustrophedon") return PlannerKind::Boustrophedon;
  if (s == "bnb") return PlannerKind::BnB;
  if (s == "hold") return PlannerKind::Hold;
  throw ConfigError("unknown planner '" + s + "' (expected spiral | boustrophedon | bnb | hold)");
}

std::string PlannerSpec::label() const {
  std::string out;
  switch (kind) {
    case PlannerKind::Spiral: out = "Spiral"; break;
    case PlannerKind::Boustrophedon: out = "Boustrophedon"; break;
    case PlannerKind::BnB: out = "B&B " + std::to_string(static_cast<int>(bnb.budget_s / 60.0 + 0.5)); break;
    case PlannerKind::Hold: out = "Hold"; break;
  }
  if (stop_after_first) out += " (stop after first)";
  return out;
}

std::unique_ptr<Planner> make_planner(const PlannerSpec& spec) {
  if (!(spec.eta > 0.0 && spec.eta < 1.0)) throw ConfigError("planner: eta must be in (0, 1)");
  std::unique_ptr<Planner> p;
  switch (spec.kind) {
    case PlannerKind::Spiral: p = std::make_unique<SpiralPlanner>(); break;
    case PlannerKind::Boustrophedon: p = std::make_unique<BoustrophedonPlanner>(spec.eta); break;
    case PlannerKind::BnB: p = std::make_unique<BnBPlanner>(spec.bnb, spec.eta); break;
    case PlannerKind::Hold: p = std::make_unique<HoldPlanner>(); break;
  }
  if (spec.stop_after_first) p = std::make_unique<StopAfterFirstFind>(std::move(p));
  return p;
}

}  // namespace sarsim
