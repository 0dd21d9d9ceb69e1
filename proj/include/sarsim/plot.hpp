#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sarsim/engine.hpp"
#include "sarsim/harness.hpp"

namespace sarsim {

struct TrajectoryPlotOptions {
  std::size_t max_particles = 1500;  // per ensemble, evenly strided
  double width_px = 800.0;
  double margin_m = 1000.0;
};

/// Trajectory trace (one polyline segment per tick), visited cells shaded by
/// recency, the particle clouds and a legend with UAV position, time and
/// found targets. With an empty trace only the grid around take-off is drawn.
std::string trajectory_svg(const SimConfig& cfg, const RunRecord& record,
                           std::span<const ParticleEnsemble> ensembles = {},
                           std::span<const TruthTarget> truths = {}, const TrajectoryPlotOptions& opt = {});

/// Grouped bars: success rate and first-target success rate per planner.
std::string metrics_svg(const MetricsTable& table);

/// Throws IoError naming the path.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace sarsim
