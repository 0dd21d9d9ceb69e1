#pragma once

#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "sarsim/engine.hpp"

namespace sarsim {

/// Line-delimited JSON run log. One object per line:
///   {"type":"run", "seed":..., "planner":"...", "targets":N}
///   {"type":"tick", "tick":k, "t":s, "uav":[i,j], "alive":[...], "found":[...]}   (traced runs)
///   {"type":"found", "tick":k, "t":s, "target":id}                                (untraced runs)
///   {"type":"summary", ...}                                                        (see run_summary)
void write_run_log(std::ostream& os, const RunRecord& record);

/// Structured summary of one run (JSON object).
nlohmann::json run_summary(const RunRecord& record);

/// Detections recovered from the raw tick/found lines of a run log. The
/// summary line is ignored, so this is an independent path to the outcomes.
struct LoggedRun {
  int targets = 0;
  std::vector<Detection> detections;
};

/// Parses one or more concatenated run logs. Throws ConfigError on malformed lines.
std::vector<LoggedRun> parse_run_logs(std::istream& is);

}  // namespace sarsim
