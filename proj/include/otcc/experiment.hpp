#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "otcc/analysis.hpp"
#include "otcc/config.hpp"
#include "otcc/simulate.hpp"

namespace otcc {

struct ExperimentResult {
  TrajectoryRecord trajectory;
  nlohmann::ordered_json summary;
  std::vector<std::int32_t> final_owner;
};

/// Runs one controller law and evaluates the summary diagnostics. No I/O.
ExperimentResult execute(const ExperimentConfig& config, Law law);

/// run: trajectory.csv, cells.csv and summary.json under config.output_dir.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// compare: both laws from identical initial conditions under vtcc/ and otcc/
/// plus comparison.json.
nlohmann::ordered_json compare_experiment(const ExperimentConfig& config);

/// Columns: step,time,robot_id,x0,x1,phi,u_norm,mass,centroid0,centroid1.
std::string trajectory_csv(const TrajectoryRecord& trajectory);
/// Columns: cell,center0,center1,owner.
std::string cells_csv(const Grid& grid, const std::vector<std::int32_t>& owner);

/// Shortest representation that parses back to the same double.
std::string format_double(double value);

/// Write to a sibling temporary file, then rename over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace otcc
