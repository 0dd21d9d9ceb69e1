#include "sarsim/run_log.hpp"

#include <istream>
#include <ostream>
#include <string>

#include "sarsim/errors.hpp"

namespace sarsim {

using nlohmann::json;

nlohmann::json run_summary(const RunRecord& r) {
  json dets = json::array();
  for (const auto& d : r.detections) dets.push_back({{"target", d.target}, {"tick", d.tick}, {"t", d.time}});
  json out = {{"type", "summary"},
              {"seed", r.seed},
              {"planner", r.planner},
              {"targets", r.target_count()},
              {"found", r.found_count()},
              {"detections", dets},
              {"termination", to_string(r.termination)},
              {"ticks", r.ticks},
              {"end_time", r.end_time},
              {"erased_particles", r.erased_particles},
              {"clamped_samples", r.clamped_samples}};
  const auto first = r.first_detection_time();
  out["time_first_s"] = first ? json(*first) : json(nullptr);
  return out;
}

void write_run_log(std::ostream& os, const RunRecord& r) {
  os << json{{"type", "run"}, {"seed", r.seed}, {"planner", r.planner}, {"targets", r.target_count()}}.dump() << '\n';
  if (!r.trace.empty()) {
    for (const auto& t : r.trace) {
      os << json{{"type", "tick"}, {"tick", t.tick}, {"t", t.time}, {"uav", {t.uav.i, t.uav.j}},
                 {"alive", t.alive}, {"found", t.found}}
                .dump()
         << '\n';
    }
  } else {
    for (const auto& d : r.detections)
      os << json{{"type", "found"}, {"tick", d.tick}, {"t", d.time}, {"target", d.target}}.dump() << '\n';
  }
  os << run_summary(r).dump() << '\n';
}

std::vector<LoggedRun> parse_run_logs(std::istream& is) {
  std::vector<LoggedRun> runs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ConfigError("run log line " + std::to_string(lineno) + ": " + e.what());
    }
    const std::string type = j.value("type", "");
    if (type == "run") {
      runs.push_back({j.at("targets").get<int>(), {}});
      continue;
    }
    if (runs.empty() && (type == "tick" || type == "found"))
      throw ConfigError("run log line " + std::to_string(lineno) + ": event before run header");
    if (type == "tick") {
      for (int k : j.at("found")) runs.back().detections.push_back({k, j.at("tick").get<int>(), j.at("t").get<double>()});
    } else if (type == "found") {
      runs.back().detections.push_back({j.at("target").get<int>(), j.at("tick").get<int>(), j.at("t").get<double>()});
    }
  }
  return runs;
}

}  // namespace sarsim
