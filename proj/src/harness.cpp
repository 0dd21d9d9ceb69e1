#include "sarsim/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "sarsim/errors.hpp"
#include "sarsim/run_log.hpp"

namespace sarsim {

void ScenarioSpec::validate() const {
  if (runs < 1) throw ConfigError("scenario: runs must be >= 1");
  if (!(distance_km > 0.0)) throw ConfigError("scenario: distance must be > 0");
  if (min_targets < 1 || max_targets < min_targets || max_targets > 8)
    throw ConfigError("scenario: target count range must satisfy 1 <= min <= max <= 8");
  if (!(bearing_width_deg >= 0.0 && bearing_width_deg <= 360.0))
    throw ConfigError("scenario: bearing width must be in [0, 360]");
  if (!(endurance_s > 0.0)) throw ConfigError("scenario: endurance must be > 0");
  if (!(cell_size > 0.0) || grid_cells < 1) throw ConfigError("scenario: invalid grid");
  if (!(uav_speed > 0.0)) throw ConfigError("scenario: uav speed must be > 0");
  if (!(sigma_init_m >= 0.0)) throw ConfigError("scenario: sigma must be >= 0");
  if (particles < 1) throw ConfigError("scenario: particles must be >= 1");
  fields.validate();
}

SimConfig generate_scenario(const ScenarioSpec& spec, int run_index) {
  spec.validate();
  const auto idx = static_cast<std::uint64_t>(run_index);

  SimConfig cfg;
  const double half = 0.5 * spec.cell_size * spec.grid_cells;
  cfg.grid = GridWorld({-half, -half}, spec.cell_size, spec.grid_cells, spec.grid_cells);
  cfg.takeoff = cfg.grid.center_of(cfg.grid.clamped_cell_of({0.0, 0.0}));
  cfg.uav = {spec.uav_speed, spec.endurance_s};
  cfg.tick_dt = tick_for(cfg.grid, cfg.uav);
  cfg.drift = spec.drift;
  cfg.drift.dt = cfg.tick_dt;
  cfg.planner = spec.planner;
  cfg.particles = spec.particles;
  cfg.sigma_init_m = spec.sigma_init_m;
  cfg.epsilon = spec.epsilon;
  cfg.record_trace = false;
  cfg.seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(Stream::Scenario), idx, 1});

  Rng rng = make_rng(spec.seed, Stream::Scenario, idx);
  const auto count = uniform_int(rng, spec.min_targets, spec.max_targets);
  const double reach = spec.distance_km * 1000.0 + 5.0 * spec.sigma_init_m +
                       (spec.fields.current_max + spec.drift.wind_leeway_factor * spec.fields.wind_max) *
                           spec.endurance_s;
  if (reach >= half) throw ConfigError("scenario: targets plus drift margin do not fit inside the grid");
  for (std::int64_t k = 0; k < count; ++k) {
    const double bearing =
        (spec.bearing_center_deg + (uniform01(rng) - 0.5) * spec.bearing_width_deg) * std::numbers::pi / 180.0;
    const Vec2 dir{std::sin(bearing), std::cos(bearing)};
    cfg.targets.push_back({cfg.takeoff + dir * (spec.distance_km * 1000.0)});
  }

  const std::uint64_t field_seed = derive_seed(spec.seed, {static_cast<std::uint64_t>(Stream::Fields), idx});
  cfg.fields = std::make_shared<const FieldPair>(generate_synthetic_fields(
      field_seed, cfg.grid.extent_min(), cfg.grid.extent_max(), spec.endurance_s + spec.fields.frame_dt, spec.fields));
  return cfg;
}

std::vector<RunRecord> run_batch(const ScenarioSpec& spec, unsigned workers) {
  spec.validate();
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(spec.runs));

  std::vector<RunRecord> out(static_cast<std::size_t>(spec.runs));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;

  auto work = [&] {
    for (int i = next++; i < spec.runs; i = next++) {
      try {
        out[static_cast<std::size_t>(i)] = run_simulation(generate_scenario(spec, i));
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = spec.runs;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

MetricsRow aggregate(const std::string& planner, const std::vector<RunRecord>& records) {
  MetricsRow row;
  row.planner = planner;
  row.runs = static_cast<int>(records.size());
  double time_sum = 0.0;
  for (const auto& r : records) {
    row.targets += r.target_count();
    row.found += r.found_count();
    if (const auto t = r.first_detection_time()) {
      ++row.runs_with_detection;
      time_sum += *t;
    }
  }
  row.success_rate = row.targets > 0 ? static_cast<double>(row.found) / row.targets : 0.0;
  row.success_rate_first = row.runs > 0 ? static_cast<double>(row.runs_with_detection) / row.runs : 0.0;
  if (row.runs_with_detection > 0) row.time_first_min = time_sum / row.runs_with_detection / 60.0;
  return row;
}

MetricsRow aggregate_logs(const std::string& planner, const std::vector<LoggedRun>& logs) {
  MetricsRow row;
  row.planner = planner;
  row.runs = static_cast<int>(logs.size());
  double time_sum = 0.0;
  for (const auto& log : logs) {
    row.targets += log.targets;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(log.targets), 0);
    std::optional<double> first;
    for (const auto& d : log.detections) {
      if (!seen.at(static_cast<std::size_t>(d.target))) ++row.found;
      seen[static_cast<std::size_t>(d.target)] = 1;
      if (!first || d.time < *first) first = d.time;
    }
    if (first) {
      ++row.runs_with_detection;
      time_sum += *first;
    }
  }
  row.success_rate = row.targets > 0 ? static_cast<double>(row.found) / row.targets : 0.0;
  row.success_rate_first = row.runs > 0 ? static_cast<double>(row.runs_with_detection) / row.runs : 0.0;
  if (row.runs_with_detection > 0) row.time_first_min = time_sum / row.runs_with_detection / 60.0;
  return row;
}

MetricsRow run_experiment(const ScenarioSpec& spec, unsigned workers) {
  return aggregate(spec.planner.label(), run_batch(spec, workers));
}

std::vector<PlannerSpec> standard_planners(const BnBConfig& base, double eta) {
  std::vector<PlannerSpec> out;
  PlannerSpec s;
  s.eta = eta;
  s.bnb = base;
  s.kind = PlannerKind::Spiral;
  out.push_back(s);
  s.kind = PlannerKind::Boustrophedon;
  out.push_back(s);
  s.kind = PlannerKind::BnB;
  for (double minutes : {15.0, 35.0, 50.0}) {
    s.bnb.budget_s = minutes * 60.0;
    out.push_back(s);
  }
  return out;
}

std::vector<MetricsTable> run_comparison(const ScenarioSpec& base, const std::vector<double>& distances_km,
                                         const std::vector<PlannerSpec>& planners, unsigned workers) {
  std::vector<MetricsTable> tables;
  for (double d : distances_km) {
    MetricsTable table;
    table.distance_km = d;
    for (const auto& p : planners) {
      ScenarioSpec spec = base;
      spec.distance_km = d;
      spec.planner = p;
      table.rows.push_back(run_experiment(spec, workers));
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

void write_table_text(std::ostream& os, const MetricsTable& table) {
  std::ostringstream title;
  title << "Targets ~" << table.distance_km << " km off shore";
  os << title.str() << '\n';
  os << std::left << std::setw(30) << "" << std::right << std::setw(14) << "success rate" << std::setw(14)
     << "time 1st" << std::setw(18) << "success rate 1st" << std::setw(8) << "runs" << '\n';
  for (const auto& r : table.rows) {
    std::ostringstream t;
    if (r.time_first_min)
      t << std::fixed << std::setprecision(1) << *r.time_first_min << " min.";
    else
      t << "--";
    os << std::left << std::setw(30) << r.planner << std::right << std::fixed << std::setprecision(2)
       << std::setw(14) << r.success_rate << std::setw(14) << t.str() << std::setw(18) << r.success_rate_first
       << std::setw(8) << r.runs << '\n';
  }
}

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_tables_csv(std::ostream& os, const std::vector<MetricsTable>& tables) {
  os << "distance_km,planner,success_rate,time_first_min,success_rate_first,runs,targets,found,runs_with_detection\n";
  os << std::setprecision(17);
  for (const auto& t : tables) {
    for (const auto& r : t.rows) {
      os << t.distance_km << ',' << csv_quote(r.planner) << ',' << r.success_rate << ',';
      if (r.time_first_min) os << *r.time_first_min;
      os << ',' << r.success_rate_first << ',' << r.runs << ',' << r.targets << ',' << r.found << ','
         << r.runs_with_detection << '\n';
    }
  }
}

std::vector<MetricsTable> read_tables_csv(std::istream& is) {
  std::vector<MetricsTable> tables;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("metrics csv: empty input");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = csv_split(line);
    if (f.size() != 9) throw ConfigError("metrics csv line " + std::to_string(lineno) + ": expected 9 fields");
    try {
      const double d = std::stod(f[0]);
      if (tables.empty() || tables.back().distance_km != d) tables.push_back({d, {}});
      MetricsRow r;
      r.planner = f[1];
      r.success_rate = std::stod(f[2]);
      if (!f[3].empty()) r.time_first_min = std::stod(f[3]);
      r.success_rate_first = std::stod(f[4]);
      r.runs = std::stoi(f[5]);
      r.targets = std::stoi(f[6]);
      r.found = std::stoi(f[7]);
      r.runs_with_detection = std::stoi(f[8]);
      tables.back().rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw ConfigError("metrics csv line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return tables;
}

}  // namespace sarsim
