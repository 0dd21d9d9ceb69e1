// sarsim command line: field generation, single runs, batch experiments.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sarsim/config.hpp"
#include "sarsim/errors.hpp"
#include "sarsim/field_io.hpp"
#include "sarsim/harness.hpp"
#include "sarsim/plot.hpp"
#include "sarsim/run_log.hpp"

namespace fs = std::filesystem;
using namespace sarsim;

namespace {

struct BatchOptions {
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::optional<double> endurance_h;
  std::string scenario_file;
  std::string out_dir = ".";
};

void add_batch_options(CLI::App* cmd, BatchOptions& o) {
  cmd->add_option("--runs", o.runs, "Runs per table cell (default 100)")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Master seed (default 1)");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = all cores)");
  cmd->add_option("--endurance-h", o.endurance_h, "UAV endurance in hours (default 2)")->check(CLI::PositiveNumber);
  cmd->add_option("--scenario", o.scenario_file, "JSON scenario with non-default parameters")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out_dir, "Output directory");
}

ScenarioSpec base_spec(const BatchOptions& o) {
  ScenarioSpec spec;
  if (!o.scenario_file.empty()) {
    std::ifstream in(o.scenario_file);
    try {
      spec = scenario_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(o.scenario_file + ": " + e.what());
    }
  }
  if (o.runs) spec.runs = *o.runs;
  if (o.seed) spec.seed = *o.seed;
  if (o.endurance_h) spec.endurance_s = *o.endurance_h * 3600.0;
  spec.validate();
  return spec;
}

void write_tables(const fs::path& dir, const std::vector<MetricsTable>& tables) {
  fs::create_directories(dir);
  std::ostringstream txt;
  for (const auto& t : tables) {
    write_table_text(txt, t);
    txt << '\n';
  }
  std::cout << txt.str();
  write_text_file(dir / "metrics.txt", txt.str());
  std::ostringstream csv;
  write_tables_csv(csv, tables);
  write_text_file(dir / "metrics.csv", csv.str());
  for (const auto& t : tables) {
    std::ostringstream name;
    name << "metrics_" << t.distance_km << "km.svg";
    write_text_file(dir / name.str(), metrics_svg(t));
  }
}

std::vector<double> parse_distances(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double d = std::stod(item, &used);
      if (used != item.size() || !(d > 0.0)) throw std::invalid_argument(item);
      out.push_back(d);
    } catch (const std::exception&) {
      throw ConfigError("--distances: bad value '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("--distances: empty list");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Drifting-target search simulator for a single fixed-wing UAV"};
  app.require_subcommand(1);

  // gen-fields
  auto* gen = app.add_subcommand("gen-fields", "Write a synthetic current/wind field file");
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  SyntheticFieldParams gen_params;
  double extent_km = 250.0;
  double duration_h = 3.0;
  gen->add_option("--seed", gen_seed, "Field seed")->required();
  gen->add_option("--out", gen_out, "Output file")->required();
  gen->add_option("--gyres", gen_params.gyres, "Number of gyres");
  gen->add_option("--current-max", gen_params.current_max, "Current speed cap (m/s)");
  gen->add_option("--wind-max", gen_params.wind_max, "Wind speed cap (m/s)");
  gen->add_option("--extent-km", extent_km, "Square extent centred on the origin (km)")->check(CLI::PositiveNumber);
  gen->add_option("--duration-h", duration_h, "Covered time span (h)")->check(CLI::PositiveNumber);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one simulation from a JSON config");
  std::string sim_config;
  std::string sim_log;
  std::string sim_plot;
  sim->add_option("--config", sim_config, "Config file")->required()->check(CLI::ExistingFile);
  sim->add_option("--log", sim_log, "Run log output (default: stdout)");
  sim->add_option("--plot", sim_plot, "Directory for SVG plots");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Batch of runs for one planner at one distance");
  BatchOptions exp_opts;
  std::optional<std::string> exp_planner;
  std::optional<double> exp_budget;
  std::optional<double> exp_distance;
  bool exp_stop_first = false;
  exp->add_option("--planner", exp_planner, "spiral | boustrophedon | bnb | hold (default spiral)")
      ->check(CLI::IsMember({"spiral", "boustrophedon", "bnb", "hold"}));
  exp->add_option("--bnb-budget-min", exp_budget, "B&B search budget per target (min, default 50)")->check(CLI::PositiveNumber);
  exp->add_option("--distance-km", exp_distance, "Distance from take-off (km, default 10)")->check(CLI::PositiveNumber);
  exp->add_flag("--stop-after-first", exp_stop_first, "End each run after the first detection");
  add_batch_options(exp, exp_opts);

  // compare
  auto* cmp = app.add_subcommand("compare", "All five planner configurations over several distances");
  BatchOptions cmp_opts;
  std::string cmp_distances = "10,20,30";
  cmp->add_option("--distances", cmp_distances, "Comma separated distances (km)");
  add_batch_options(cmp, cmp_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const double half = 500.0 * extent_km;
      const FieldPair f =
          generate_synthetic_fields(gen_seed, {-half, -half}, {half, half}, duration_h * 3600.0, gen_params);
      save_fields(f, gen_out);
      std::cerr << "wrote " << gen_out << " (" << f.current.nx() << "x" << f.current.ny() << "x" << f.current.nt()
                << " nodes)\n";
    } else if (*sim) {
      SimConfig cfg = load_sim_config(sim_config);
      cfg.record_trace = true;
      Simulation s(cfg);
      while (s.step()) {
      }
      const RunRecord& rec = s.record();
      if (sim_log.empty()) {
        write_run_log(std::cout, rec);
      } else {
        std::ostringstream log;
        write_run_log(log, rec);
        write_text_file(sim_log, log.str());
        std::cout << run_summary(rec).dump(2) << '\n';
      }
      if (!sim_plot.empty()) {
        fs::create_directories(sim_plot);
        write_text_file(fs::path(sim_plot) / "trajectory.svg", trajectory_svg(cfg, rec, s.ensembles(), s.truths()));
      }
    } else if (*exp) {
      ScenarioSpec spec = base_spec(exp_opts);
      if (exp_distance) spec.distance_km = *exp_distance;
      if (exp_planner) spec.planner.kind = parse_planner_kind(*exp_planner);
      if (exp_budget) spec.planner.bnb.budget_s = *exp_budget * 60.0;
      if (exp_stop_first) spec.planner.stop_after_first = true;
      spec.validate();
      MetricsTable t{spec.distance_km, {run_experiment(spec, exp_opts.workers)}};
      write_tables(exp_opts.out_dir, {t});
    } else if (*cmp) {
      const ScenarioSpec spec = base_spec(cmp_opts);
      const auto tables =
          run_comparison(spec, parse_distances(cmp_distances), standard_planners(spec.planner.bnb, spec.planner.eta),
                         cmp_opts.workers);
      write_tables(cmp_opts.out_dir, tables);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
