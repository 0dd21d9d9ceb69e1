#include "sarsim/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string>

#include "sarsim/errors.hpp"
#include "sarsim/field_io.hpp"

namespace sarsim {

using nlohmann::json;

namespace {

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

Vec2 read_vec(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ConfigError(where + ": expected [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

GridWorld default_grid(double cell_size, int cells) {
  const double half = 0.5 * cell_size * cells;
  return GridWorld({-half, -half}, cell_size, cells, cells);
}

}  // namespace

PlannerSpec planner_from_json(const json& j) {
  const std::string where = "planner";
  check_keys(j, where, {"kind", "eta", "bnb", "stop_after_first"});
  PlannerSpec p;
  std::string kind = to_string(p.kind);
  read(j, "kind", kind, where);
  p.kind = parse_planner_kind(kind);
  read(j, "eta", p.eta, where);
  read(j, "stop_after_first", p.stop_after_first, where);
  if (j.contains("bnb")) {
    const json& b = j.at("bnb");
    const std::string bw = where + ".bnb";
    check_keys(b, bw, {"budget_min", "horizon", "beam", "vicinity_r", "max_expansions"});
    double budget_min = p.bnb.budget_s / 60.0;
    read(b, "budget_min", budget_min, bw);
    p.bnb.budget_s = budget_min * 60.0;
    read(b, "horizon", p.bnb.horizon, bw);
    read(b, "vicinity_r", p.bnb.vicinity_r, bw);
    if (b.contains("beam") && b.at("beam").is_string() && b.at("beam") == "unlimited")
      p.bnb.beam = BnBConfig::kUnlimited;
    else
      read(b, "beam", p.bnb.beam, bw);
    read(b, "max_expansions", p.bnb.max_expansions, bw);
  }
  if (!(p.eta > 0.0 && p.eta < 1.0)) throw ConfigError("planner.eta must be in (0, 1)");
  p.bnb.validate();
  return p;
}

json to_json(const PlannerSpec& p) {
  json b = {{"budget_min", p.bnb.budget_s / 60.0},
            {"horizon", p.bnb.horizon},
            {"vicinity_r", p.bnb.vicinity_r},
            {"max_expansions", p.bnb.max_expansions}};
  if (p.bnb.beam == BnBConfig::kUnlimited)
    b["beam"] = "unlimited";
  else
    b["beam"] = p.bnb.beam;
  return {{"kind", to_string(p.kind)}, {"eta", p.eta}, {"bnb", b}, {"stop_after_first", p.stop_after_first}};
}

DriftParams drift_from_json(const json& j) {
  check_keys(j, "drift", {"wind_leeway_factor", "diffusion_coeff"});
  DriftParams d;
  read(j, "wind_leeway_factor", d.wind_leeway_factor, "drift");
  read(j, "diffusion_coeff", d.diffusion_coeff, "drift");
  d.validate();
  return d;
}

json to_json(const DriftParams& d) {
  return {{"wind_leeway_factor", d.wind_leeway_factor}, {"diffusion_coeff", d.diffusion_coeff}};
}

SyntheticFieldParams field_params_from_json(const json& j) {
  const std::string w = "fields";
  check_keys(j, w,
             {"gyres", "gyre_radius_min", "gyre_radius_max", "gyre_orbit_period", "background_max", "current_max",
              "wind_max", "wind_mean_min", "wind_veer_amplitude_deg", "wind_veer_period", "wind_noise", "spacing",
              "frame_dt"});
  SyntheticFieldParams f;
  read(j, "gyres", f.gyres, w);
  read(j, "gyre_radius_min", f.gyre_radius_min, w);
  read(j, "gyre_radius_max", f.gyre_radius_max, w);
  read(j, "gyre_orbit_period", f.gyre_orbit_period, w);
  read(j, "background_max", f.background_max, w);
  read(j, "current_max", f.current_max, w);
  read(j, "wind_max", f.wind_max, w);
  read(j, "wind_mean_min", f.wind_mean_min, w);
  read(j, "wind_veer_amplitude_deg", f.wind_veer_amplitude_deg, w);
  read(j, "wind_veer_period", f.wind_veer_period, w);
  read(j, "wind_noise", f.wind_noise, w);
  read(j, "spacing", f.spacing, w);
  read(j, "frame_dt", f.frame_dt, w);
  f.validate();
  return f;
}

json to_json(const SyntheticFieldParams& f) {
  return {{"gyres", f.gyres},
          {"gyre_radius_min", f.gyre_radius_min},
          {"gyre_radius_max", f.gyre_radius_max},
          {"gyre_orbit_period", f.gyre_orbit_period},
          {"background_max", f.background_max},
          {"current_max", f.current_max},
          {"wind_max", f.wind_max},
          {"wind_mean_min", f.wind_mean_min},
          {"wind_veer_amplitude_deg", f.wind_veer_amplitude_deg},
          {"wind_veer_period", f.wind_veer_period},
          {"wind_noise", f.wind_noise},
          {"spacing", f.spacing},
          {"frame_dt", f.frame_dt}};
}

ScenarioSpec scenario_from_json(const json& j) {
  const std::string w = "scenario";
  check_keys(j, w,
             {"distance_km", "min_targets", "max_targets", "bearing_center_deg", "bearing_width_deg", "runs", "seed",
              "endurance_s", "planner", "particles", "sigma_m", "epsilon", "drift", "fields", "cell_size",
              "grid_cells", "uav_speed"});
  ScenarioSpec s;
  read(j, "distance_km", s.distance_km, w);
  read(j, "min_targets", s.min_targets, w);
  read(j, "max_targets", s.max_targets, w);
  read(j, "bearing_center_deg", s.bearing_center_deg, w);
  read(j, "bearing_width_deg", s.bearing_width_deg, w);
  read(j, "runs", s.runs, w);
  read(j, "seed", s.seed, w);
  read(j, "endurance_s", s.endurance_s, w);
  read(j, "particles", s.particles, w);
  read(j, "sigma_m", s.sigma_init_m, w);
  read(j, "epsilon", s.epsilon, w);
  read(j, "cell_size", s.cell_size, w);
  read(j, "grid_cells", s.grid_cells, w);
  read(j, "uav_speed", s.uav_speed, w);
  if (j.contains("planner")) s.planner = planner_from_json(j.at("planner"));
  if (j.contains("drift")) s.drift = drift_from_json(j.at("drift"));
  if (j.contains("fields")) s.fields = field_params_from_json(j.at("fields"));
  s.validate();
  return s;
}

json to_json(const ScenarioSpec& s) {
  return {{"distance_km", s.distance_km},
          {"min_targets", s.min_targets},
          {"max_targets", s.max_targets},
          {"bearing_center_deg", s.bearing_center_deg},
          {"bearing_width_deg", s.bearing_width_deg},
          {"runs", s.runs},
          {"seed", s.seed},
          {"endurance_s", s.endurance_s},
          {"planner", to_json(s.planner)},
          {"particles", s.particles},
          {"sigma_m", s.sigma_init_m},
          {"epsilon", s.epsilon},
          {"drift", to_json(s.drift)},
          {"fields", to_json(s.fields)},
          {"cell_size", s.cell_size},
          {"grid_cells", s.grid_cells},
          {"uav_speed", s.uav_speed}};
}

SimConfig sim_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  require_object(j, "config");
  if (j.contains("scenario")) {
    check_keys(j, "config", {"scenario", "run_index", "record_trace"});
    const ScenarioSpec spec = scenario_from_json(j.at("scenario"));
    int index = 0;
    read(j, "run_index", index, "config");
    if (index < 0 || index >= spec.runs) throw ConfigError("config.run_index must be in [0, runs)");
    SimConfig cfg = generate_scenario(spec, index);
    cfg.record_trace = true;
    read(j, "record_trace", cfg.record_trace, "config");
    return cfg;
  }

  check_keys(j, "config",
             {"seed", "grid", "takeoff", "uav", "fields", "drift", "planner", "targets", "particles", "sigma_m",
              "epsilon", "truth_mode", "record_trace"});
  SimConfig cfg;
  read(j, "seed", cfg.seed, "config");

  cfg.grid = default_grid(100.0, 2500);
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"origin", "cell_size", "nx", "ny"});
    double cs = 100.0;
    int nx = 2500;
    int ny = 2500;
    read(g, "cell_size", cs, "grid");
    read(g, "nx", nx, "grid");
    read(g, "ny", ny, "grid");
    if (!(cs > 0.0) || nx < 1 || ny < 1) throw ConfigError("grid: cell_size must be > 0 and nx, ny >= 1");
    const Vec2 origin = g.contains("origin") ? read_vec(g.at("origin"), "grid.origin")
                                             : Vec2{-0.5 * cs * nx, -0.5 * cs * ny};
    cfg.grid = GridWorld(origin, cs, nx, ny);
  }
  cfg.takeoff = j.contains("takeoff") ? read_vec(j.at("takeoff"), "takeoff")
                                      : cfg.grid.center_of(cfg.grid.clamped_cell_of({0.0, 0.0}));

  if (j.contains("uav")) {
    check_keys(j.at("uav"), "uav", {"speed", "endurance_s"});
    read(j.at("uav"), "speed", cfg.uav.speed, "uav");
    read(j.at("uav"), "endurance_s", cfg.uav.endurance_s, "uav");
  }
  if (!(cfg.uav.speed > 0.0) || !(cfg.uav.endurance_s > 0.0)) throw ConfigError("uav: speed and endurance must be > 0");
  cfg.tick_dt = tick_for(cfg.grid, cfg.uav);

  if (j.contains("drift")) cfg.drift = drift_from_json(j.at("drift"));
  cfg.drift.dt = cfg.tick_dt;
  if (j.contains("planner")) cfg.planner = planner_from_json(j.at("planner"));

  if (!j.contains("targets") || !j.at("targets").is_array() || j.at("targets").empty())
    throw ConfigError("config.targets: expected a non-empty array");
  for (const auto& t : j.at("targets")) {
    check_keys(t, "targets[]", {"center"});
    if (!t.contains("center")) throw ConfigError("targets[]: missing center");
    cfg.targets.push_back({read_vec(t.at("center"), "targets[].center")});
  }
  read(j, "particles", cfg.particles, "config");
  read(j, "sigma_m", cfg.sigma_init_m, "config");
  read(j, "epsilon", cfg.epsilon, "config");
  read(j, "record_trace", cfg.record_trace, "config");
  std::string mode = "independent";
  read(j, "truth_mode", mode, "config");
  if (mode == "independent")
    cfg.truth_mode = TruthMode::Independent;
  else if (mode == "shared")
    cfg.truth_mode = TruthMode::SharedParticle;
  else
    throw ConfigError("config.truth_mode: expected 'independent' or 'shared'");

  const double duration = cfg.uav.endurance_s + 3600.0;
  if (!j.contains("fields")) {
    cfg.fields = std::make_shared<const FieldPair>(generate_synthetic_fields(
        derive_seed(cfg.seed, {static_cast<std::uint64_t>(Stream::Fields)}), cfg.grid.extent_min(),
        cfg.grid.extent_max(), duration));
  } else {
    const json& f = j.at("fields");
    require_object(f, "fields");
    if (f.size() != 1) throw ConfigError("fields: expected exactly one of synthetic, file, constant");
    if (f.contains("synthetic")) {
      json params = f.at("synthetic");
      require_object(params, "fields.synthetic");
      std::uint64_t seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(Stream::Fields)});
      if (params.contains("seed")) {
        read(params, "seed", seed, "fields.synthetic");
        params.erase("seed");
      }
      cfg.fields = std::make_shared<const FieldPair>(generate_synthetic_fields(
          seed, cfg.grid.extent_min(), cfg.grid.extent_max(), duration, field_params_from_json(params)));
    } else if (f.contains("file")) {
      std::filesystem::path p = f.at("file").get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      cfg.fields = std::make_shared<const FieldPair>(load_fields(p));
    } else if (f.contains("constant")) {
      const json& c = f.at("constant");
      check_keys(c, "fields.constant", {"current", "wind"});
      const Vec2 cur = c.contains("current") ? read_vec(c.at("current"), "fields.constant.current") : Vec2{};
      const Vec2 wind = c.contains("wind") ? read_vec(c.at("wind"), "fields.constant.wind") : Vec2{};
      const Vec2 lo = cfg.grid.extent_min();
      const Vec2 hi = cfg.grid.extent_max();
      cfg.fields = std::make_shared<const FieldPair>(
          FieldPair{VectorField::constant(cur, lo, hi, duration), VectorField::constant(wind, lo, hi, duration)});
    } else {
      throw ConfigError("fields: expected one of synthetic, file, constant");
    }
  }
  cfg.validate();
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return sim_config_from_json(j, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace sarsim
