#include "otcc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otcc/analysis.hpp"
#include "otcc/error.hpp"

namespace otcc {
namespace {

double max_norm(const std::vector<double>& v, std::size_t dim, std::vector<double>* norms) {
  double worst = 0.0;
  for (std::size_t i = 0; i < v.size() / dim; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) sq += v[i * dim + k] * v[i * dim + k];
    const double norm = std::sqrt(sq);
    if (norms) norms->push_back(norm);
    worst = std::max(worst, norm);
  }
  return worst;
}

Snapshot make_snapshot(std::size_t step_index, const SwarmState& state, const Tessellation& tess,
                       const ControlOutput& out, const GridDensity& density) {
  Snapshot s;
  s.step = step_index;
  s.time = state.time;
  s.positions = state.positions;
  s.weights = state.weights;
  s.mass = tess.stats.mass;
  s.centroid = tess.stats.centroid;
  max_norm(out.u, state.dim, &s.u_norm);
  s.phi_dot = out.phi_dot;
  s.F = out.F_value;
  s.J = cost_J(state, density, true);
  return s;
}

}  // namespace

void SimConfig::validate(const ControllerParams& params, const Grid& grid) const {
  params.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::kInvalidArgument, "dt must be positive");
  if (!(max_time > 0.0) || !std::isfinite(max_time)) {
    throw Error(ErrorKind::kInvalidArgument, "max_time must be positive");
  }
  if (max_time < dt) throw Error(ErrorKind::kInvalidArgument, "max_time is shorter than one step");
  if (record_every == 0) throw Error(ErrorKind::kInvalidArgument, "record_every must be positive");
  if (!(steady_u_tol > 0.0) || !(steady_phi_tol > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "steady-state tolerances must be positive");
  }
  if (!(dt * params.k < 1.0)) throw Error(ErrorKind::kInvalidArgument, "dt * k must be below 1");

  const std::size_t d = grid.dim();
  if (initial_positions.empty() || initial_positions.size() % d != 0) {
    throw Error(ErrorKind::kInvalidArgument, "initial positions must hold dim values per robot");
  }
  const std::size_t n = initial_positions.size() / d;
  if (!initial_weights.empty() && initial_weights.size() != n) {
    throw Error(ErrorKind::kInvalidArgument, "initial weights must have one value per robot");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!grid.workspace().contains({initial_positions.data() + i * d, d})) {
      throw Error(ErrorKind::kInvalidArgument,
                  "initial position of robot " + std::to_string(i) + " is outside the workspace");
    }
  }
  SwarmState(d, initial_positions, initial_weights).validate();
}

SwarmState advance(const SwarmState& state, const ControlOutput& control,
                   const ControllerParams& params, const SimConfig& config, const Grid& grid) {
  const std::size_t d = state.dim;
  const Workspace& ws = grid.workspace();
  SwarmState next = state;
  for (std::size_t i = 0; i < state.size(); ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double x = state.positions[i * d + k] + config.dt * control.u[i * d + k];
      if (!std::isfinite(x)) {
        throw Error(ErrorKind::kNumericalBlowup,
                    "robot " + std::to_string(i) + " position became non-finite at t=" +
                        std::to_string(state.time));
      }
      next.positions[i * d + k] = std::clamp(x, ws.lower[k], ws.upper[k]);
    }
    if (params.law == Law::kOtcc) {
      next.weights[i] = state.weights[i] + config.dt * control.phi_dot[i];
      if (!std::isfinite(next.weights[i])) {
        throw Error(ErrorKind::kNumericalBlowup,
                    "robot " + std::to_string(i) + " weight became non-finite at t=" +
                        std::to_string(state.time));
      }
    }
  }
  next.time = state.time + config.dt;
  return next;
}

SwarmState step(const SwarmState& state, const ControllerParams& params, const SimConfig& config,
                const GridDensity& density) {
  const Tessellation tess = tessellate(density, state, false);
  return advance(state, control_step(state, tess, params), params, config, *density.grid);
}

TrajectoryRecord run(const SimConfig& config, const ControllerParams& params,
                     const GridDensity& density) {
  const Grid& grid = *density.grid;
  config.validate(params, grid);
  const std::size_t d = grid.dim();

  SwarmState state(d, config.initial_positions, config.initial_weights, 0.0);
  const auto total_steps = static_cast<std::size_t>(std::ceil(config.max_time / config.dt - 1e-9));

  TrajectoryRecord record;
  record.dim = d;
  for (std::size_t s = 0;; ++s) {
    const Tessellation tess = tessellate(density, state, false);
    const ControlOutput out = control_step(state, tess, params);

    double max_phi_dot = 0.0;
    for (double v : out.phi_dot) max_phi_dot = std::max(max_phi_dot, std::abs(v));
    const bool steady =
        max_norm(out.u, d, nullptr) < config.steady_u_tol && max_phi_dot < config.steady_phi_tol;
    const bool done = steady || s >= total_steps;

    if (s % config.record_every == 0 || done) {
      record.snapshots.push_back(make_snapshot(s, state, tess, out, density));
    }
    if (done) {
      record.steady_state_reached = steady;
      record.steps = s;
      break;
    }

    SwarmState next = advance(state, out, params, config, grid);
    next.time = static_cast<double>(s + 1) * config.dt;

    if (config.probe_monotonicity) {
      MonotonicityProbe probe;
      probe.F = out.F_value;
      SwarmState moved_x = state;
      moved_x.positions = next.positions;
      probe.F_moved_x = dual_value(moved_x, tessellate(density, moved_x, false));
      if (params.law == Law::kOtcc) {
        SwarmState moved_phi = state;
        moved_phi.weights = next.weights;
        probe.F_moved_phi = dual_value(moved_phi, tessellate(density, moved_phi, false));
      } else {
        probe.F_moved_phi = out.F_value;
      }
      record.probes.push_back(probe);
    }
    state = std::move(next);
  }
  record.final_state = state;
  return record;
}

}  // namespace otcc
