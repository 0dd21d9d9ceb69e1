#pragma once

#include <filesystem>

#include <json.hpp>

#include "sarsim/harness.hpp"

namespace sarsim {

/// JSON run configuration. Two forms are accepted:
///
///   {"scenario": {...}, "run_index": 3}     one run drawn from a batch scenario
///
/// or an explicit run:
///
///   {
///     "seed": 7,
///     "grid": {"origin": [-125000, -125000], "cell_size": 100, "nx": 2500, "ny": 2500},
///     "takeoff": [50, 50],
///     "uav": {"speed": 18, "endurance_s": 7200},
///     "fields": {"synthetic": {"seed": 3, "gyres": 4}}   | {"file": "fields.bin"}
///             | {"constant": {"current": [0.1, 0], "wind": [5, 0]}},
///     "drift": {"wind_leeway_factor": 0.03, "diffusion_coeff": 1.0},
///     "planner": {"kind": "bnb", "eta": 0.75, "bnb": {"budget_min": 15}},
///     "targets": [{"center": [0, 10000]}],
///     "particles": 10000, "sigma_m": 1000, "epsilon": 0,
///     "truth_mode": "independent", "record_trace": true
///   }
///
/// Every key except "targets" is optional. Unknown keys are rejected.
/// Relative field file paths resolve against `base_dir`.
SimConfig sim_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SimConfig load_sim_config(const std::filesystem::path& path);

PlannerSpec planner_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PlannerSpec& p);

DriftParams drift_from_json(const nlohmann::json& j);
nlohmann::json to_json(const DriftParams& d);

SyntheticFieldParams field_params_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SyntheticFieldParams& f);

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpec& s);

}  // namespace sarsim
