#include "otcc/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "otcc/error.hpp"

namespace otcc {
namespace {

using nlohmann::ordered_json;

void check_finite(const ordered_json& node, const std::string& path) {
  if (node.is_number_float() && !std::isfinite(node.get<double>())) {
    throw Error(ErrorKind::kNumericalBlowup, "summary field " + path + " is not finite");
  }
  if (node.is_object()) {
    for (const auto& item : node.items()) check_finite(item.value(), path + "." + item.key());
  } else if (node.is_array()) {
    for (std::size_t k = 0; k < node.size(); ++k) check_finite(node[k], path + "[" + std::to_string(k) + "]");
  }
}

std::size_t upper_right_count(const SwarmState& state) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (state.positions[i * 2] > 0.0 && state.positions[i * 2 + 1] > 0.0) ++count;
  }
  return count;
}

std::vector<double> mean_position(const SwarmState& state) {
  std::vector<double> mean(state.dim, 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (std::size_t k = 0; k < state.dim; ++k) mean[k] += state.positions[i * state.dim + k];
  }
  for (double& m : mean) m /= static_cast<double>(state.size());
  return mean;
}

/// Step bounded by the weight Hessian's largest eigenvalue, which is at most
/// 4 max rho(m) / gap over adjacent robots.
void write_run(const std::filesystem::path& dir, const ExperimentResult& result, const Grid& grid) {
  std::filesystem::create_directories(dir);
  write_atomic(dir / "trajectory.csv", trajectory_csv(result.trajectory));
  write_atomic(dir / "cells.csv", cells_csv(grid, result.final_owner));
  write_atomic(dir / "summary.json", result.summary.dump(2) + "\n");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const TrajectoryRecord& trajectory) {
  const std::size_t d = trajectory.dim;
  std::string out = "step,time,robot_id,x0,x1,phi,u_norm,mass,centroid0,centroid1\n";
  for (const Snapshot& s : trajectory.snapshots) {
    for (std::size_t i = 0; i < s.weights.size(); ++i) {
      out += std::to_string(s.step) + ',' + format_double(s.time) + ',' + std::to_string(i) + ',';
      out += format_double(s.positions[i * d]) + ',';
      if (d == 2) out += format_double(s.positions[i * d + 1]);
      out += ',' + format_double(s.weights[i]) + ',' + format_double(s.u_norm[i]) + ',' +
             format_double(s.mass[i]) + ',' + format_double(s.centroid[i * d]) + ',';
      if (d == 2) out += format_double(s.centroid[i * d + 1]);
      out += '\n';
    }
  }
  return out;
}

std::string cells_csv(const Grid& grid, const std::vector<std::int32_t>& owner) {
  std::string out = "cell,center0,center1,owner\n";
  for (std::size_t c = 0; c < grid.num_cells(); ++c) {
    const auto center = grid.center(c);
    out += std::to_string(c) + ',' + format_double(center[0]) + ',';
    if (grid.dim() == 2) out += format_double(center[1]);
    out += ',' + std::to_string(owner[c]) + '\n';
  }
  return out;
}

ExperimentResult execute(const ExperimentConfig& config, Law law) {
  const Density density = config.make_density();
  const Grid grid = config.make_grid();
  const GridDensity gd = discretize(density, grid);
  ControllerParams params = config.controller;
  params.law = law;

  ExperimentResult result;
  result.trajectory = run(config.simulation, params, gd);
  const SwarmState& final_state = result.trajectory.final_state;
  const Tessellation tess = tessellate(gd, final_state, true);
  result.final_owner = tess.owner;
  const StabilityReport stability = stability_report(final_state, gd, density);

  ordered_json s;
  s["name"] = config.name;
  s["law"] = std::string(to_string(law));
  s["dimension"] = config.dimension;
  s["robots"] = final_state.size();
  s["steps"] = result.trajectory.steps;
  s["final_time"] = final_state.time;
  s["steady_state_reached"] = result.trajectory.steady_state_reached;
  s["cost_J"] = cost_J(final_state, gd, true);
  s["cost_J_laguerre"] = cost_J(final_state, gd, false);
  s["F_final"] = dual_value(final_state, tess);
  s["equilibrium"] = {{"max_centroid_residual", stability.max_centroid_residual},
                      {"max_mass_residual", stability.max_mass_residual}};
  s["min_eig_hessian_x"] = stability.min_eig_hessian_x;
  s["hessian_x_positive_definite"] = stability.hessian_x_positive_definite;
  s["max_eig_hessian_phi"] = stability.max_eig_hessian_phi;
  if (config.dimension == 1) {
    s["h_index"] = {{"paper_literal", stability.h.paper_literal},
                    {"derived", stability.h.derived},
                    {"paper_literal_max", stability.h.paper_literal_max},
                    {"derived_max", stability.h.derived_max}};
  } else {
    s["upper_right_count"] = upper_right_count(final_state);
  }
  s["lyapunov_stable_flag"] = stability.lyapunov_stable_flag;
  s["mean_position"] = mean_position(final_state);
  std::vector<double> ranges;
  for (std::size_t i = 0; i < final_state.size(); ++i) {
    ranges.push_back(required_range(final_state, tess.neighbor_sets, i));
  }
  s["required_range"] = ranges;
  if (config.simulation.probe_monotonicity) {
    const MonotonicityReport audit =
        monotonicity_audit(result.trajectory, monotonicity_tolerance(gd), law == Law::kVtcc);
    s["monotonicity"] = {{"tolerance", audit.tolerance},
                         {"checked_steps", audit.checked_steps},
                         {"x_descent_violations", audit.x_descent_violations},
                         {"phi_ascent_violations", audit.phi_ascent_violations},
                         {"cost_increase_violations", audit.cost_increase_violations},
                         {"worst_x_violation", audit.worst_x_violation},
                         {"worst_phi_violation", audit.worst_phi_violation},
                         {"worst_cost_increase", audit.worst_cost_increase}};
  }
  s["final_positions"] = final_state.positions;
  s["final_weights"] = final_state.weights;
  check_finite(s, "summary");
  result.summary = std::move(s);
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  ExperimentResult result = execute(config, config.controller.law);
  write_run(config.output_dir, result, config.make_grid());
  return result;
}

ordered_json compare_experiment(const ExperimentConfig& config) {
  const ExperimentResult vtcc = execute(config, Law::kVtcc);
  const ExperimentResult otcc = execute(config, Law::kOtcc);
  const Grid grid = config.make_grid();

  ordered_json c;
  c["name"] = config.name;
  c["J_vtcc"] = vtcc.summary["cost_J"];
  c["J_otcc"] = otcc.summary["cost_J"];
  c["otcc_better"] = otcc.summary["cost_J"].get<double>() < vtcc.summary["cost_J"].get<double>();
  c["J_otcc_laguerre"] = otcc.summary["cost_J_laguerre"];
  c["steady_state_reached"] = {{"vtcc", vtcc.summary["steady_state_reached"]},
                               {"otcc", otcc.summary["steady_state_reached"]}};
  c["mean_position"] = {{"vtcc", vtcc.summary["mean_position"]}, {"otcc", otcc.summary["mean_position"]}};
  if (config.dimension == 2) {
    c["upper_right_count"] = {{"vtcc", vtcc.summary["upper_right_count"]},
                              {"otcc", otcc.summary["upper_right_count"]}};
  } else {
    const Density density = config.make_density();
    const GridDensity gd = discretize(density, grid);
    const auto& x = otcc.trajectory.final_state.positions;
    const DualityGap gap =
        duality_gap_1d(x, density, gd, 20000, ascent_rate_1d(x, density, grid.workspace()));
    c["duality"] = {{"positions", "otcc_final"},
                    {"max_F", gap.max_F},
                    {"oracle_W", gap.oracle_W},
                    {"gap", gap.gap},
                    {"ascent_steps", gap.steps},
                    {"converged", gap.converged}};
  }
  check_finite(c, "comparison");

  const std::filesystem::path root(config.output_dir);
  write_run(root / "vtcc", vtcc, grid);
  write_run(root / "otcc", otcc, grid);
  write_atomic(root / "comparison.json", c.dump(2) + "\n");
  return c;
}

}  // namespace otcc
