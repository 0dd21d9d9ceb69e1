#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sarsim/engine.hpp"
#include "sarsim/run_log.hpp"

namespace sarsim {

/// Batch scenario description. Take-off sits at the centre of the grid;
/// bearings are compass degrees (0 = +y, 90 = +x).
struct ScenarioSpec {
  double distance_km = 10.0;
  int min_targets = 1;
  int max_targets = 2;
  double bearing_center_deg = 0.0;
  double bearing_width_deg = 90.0;
  int runs = 100;
  std::uint64_t seed = 1;
  double endurance_s = 2.0 * 3600.0;

  PlannerSpec planner;
  std::size_t particles = 10'000;
  double sigma_init_m = 1000.0;
  double epsilon = 0.0;
  DriftParams drift;
  SyntheticFieldParams fields;

  double cell_size = 100.0;
  int grid_cells = 2500;  // per axis
  double uav_speed = 18.0;

  void validate() const;
};

/// Deterministic per (spec.seed, run_index). The run's sub-seed, target count,
/// bearings and field seed depend only on those two values, so planners and
/// distances compared under the same seed see matched draws.
SimConfig generate_scenario(const ScenarioSpec& spec, int run_index);

/// Runs all spec.runs simulations on `workers` threads (0 = hardware
/// concurrency). Records are returned in run order; traces are not kept.
std::vector<RunRecord> run_batch(const ScenarioSpec& spec, unsigned workers = 0);

struct MetricsRow {
  std::string planner;
  double success_rate = 0.0;
  std::optional<double> time_first_min;
  double success_rate_first = 0.0;
  int runs = 0;
  int targets = 0;
  int found = 0;
  int runs_with_detection = 0;

  bool operator==(const MetricsRow&) const = default;
};

/// found / targets; mean first-detection time over runs with a detection;
/// fraction of runs with a detection.
MetricsRow aggregate(const std::string& planner, const std::vector<RunRecord>& records);
/// The same metrics recomputed from parsed run logs.
MetricsRow aggregate_logs(const std::string& planner, const std::vector<LoggedRun>& logs);

struct MetricsTable {
  double distance_km = 0.0;
  std::vector<MetricsRow> rows;

  bool operator==(const MetricsTable&) const = default;
};

MetricsRow run_experiment(const ScenarioSpec& spec, unsigned workers = 0);

/// The five evaluated planner configurations: Spiral, Boustrophedon, B&B 15/35/50.
std::vector<PlannerSpec> standard_planners(const BnBConfig& base = {}, double eta = 0.75);

/// One table per distance, rows in standard_planners() order.
std::vector<MetricsTable> run_comparison(const ScenarioSpec& base, const std::vector<double>& distances_km,
                                         const std::vector<PlannerSpec>& planners, unsigned workers = 0);

/// Human-readable table (planner | success rate | time 1st | success rate 1st).
void write_table_text(std::ostream& os, const MetricsTable& table);
void write_tables_csv(std::ostream& os, const std::vector<MetricsTable>& tables);
std::vector<MetricsTable> read_tables_csv(std::istream& is);

}  // namespace sarsim
