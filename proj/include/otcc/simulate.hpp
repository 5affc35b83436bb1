#pragma once

#include <cstddef>
#include <vector>

#include "otcc/control.hpp"
#include "otcc/density.hpp"
#include "otcc/swarm.hpp"

namespace otcc {

struct SimConfig {
  double dt = 0.1;
  double max_time = 500.0;
  std::size_t record_every = 100;
  double steady_u_tol = 1e-3;
  double steady_phi_tol = 1e-9;
  /// Evaluate F(x + dt u, phi) and F(x, phi + dt phi_dot) every step.
  bool probe_monotonicity = false;
  std::vector<double> initial_positions;  // dim per robot
  std::vector<double> initial_weights;    // empty means all zero

  void validate(const ControllerParams& params, const Grid& grid) const;
};

struct Snapshot {
  std::size_t step = 0;
  double time = 0.0;
  std::vector<double> positions;
  std::vector<double> weights;
  std::vector<double> mass;
  std::vector<double> centroid;
  std::vector<double> u_norm;
  std::vector<double> phi_dot;
  double F = 0.0;
  double J = 0.0;  // Voronoi coverage cost of the positions
};

/// Split-step values of F for one Euler step.
struct MonotonicityProbe {
  double F = 0.0;            // F(x_t, phi_t)
  double F_moved_x = 0.0;    // F(x_{t+dt}, phi_t)
  double F_moved_phi = 0.0;  // F(x_t, phi_{t+dt})
};

struct TrajectoryRecord {
  std::size_t dim = 1;
  std::vector<Snapshot> snapshots;
  std::vector<MonotonicityProbe> probes;
  bool steady_state_reached = false;
  std::size_t steps = 0;
  SwarmState final_state;
};

/// One explicit Euler step; positions are clamped to the workspace.
SwarmState step(const SwarmState& state, const ControllerParams& params, const SimConfig& config,
                const GridDensity& density);

/// Same step from an already computed control output.
SwarmState advance(const SwarmState& state, const ControlOutput& control,
                   const ControllerParams& params, const SimConfig& config, const Grid& grid);

TrajectoryRecord run(const SimConfig& config, const ControllerParams& params,
                     const GridDensity& density);

}  // namespace otcc
