#include "otcc/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otcc/error.hpp"

namespace otcc {

std::vector<std::int32_t> assign(const Grid& grid, const SwarmState& state, Backend backend) {
  state.validate();
  if (state.dim != grid.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "swarm and grid dimensions differ");
  }
  // Only weight differences matter; measuring them from the largest weight
  // makes a uniform shift of all weights an exact no-op.
  const double top = *std::max_element(state.weights.begin(), state.weights.end());
  std::vector<double> shifted(state.weights.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = state.weights[i] - top;

  std::vector<std::int32_t> owner(grid.num_cells());
  kernels::assign_owners(backend, grid.centers(), grid.dim(), state.positions, shifted, owner);
  return owner;
}

CellStatistics masses_and_centroids(const std::vector<std::int32_t>& owner,
                                    const GridDensity& density, const SwarmState& state,
                                    Backend backend) {
  const Grid& grid = *density.grid;
  if (owner.size() != grid.num_cells() || density.cell_mass.size() != grid.num_cells()) {
    throw Error(ErrorKind::kInvalidArgument, "owner map and grid density sizes differ");
  }
  const std::size_t n = state.size();
  const std::size_t d = state.dim;
  kernels::CellSums sums =
      kernels::accumulate_cells(backend, grid.centers(), d, density.cell_mass, owner, state.positions);

  CellStatistics stats;
  stats.mass = std::move(sums.mass);
  stats.cost = std::move(sums.cost);
  stats.centroid.resize(n * d);
  stats.empty.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (stats.mass[i] < kEmptyMass) {
      stats.empty[i] = true;
      for (std::size_t k = 0; k < d; ++k) stats.centroid[i * d + k] = state.positions[i * d + k];
    } else {
      for (std::size_t k = 0; k < d; ++k) {
        stats.centroid[i * d + k] = sums.moment[i * d + k] / stats.mass[i];
      }
    }
  }
  return stats;
}

std::vector<std::vector<std::size_t>> neighbors(const std::vector<std::int32_t>& owner,
                                                const Grid& grid, std::size_t num_robots) {
  std::vector<char> adjacent(num_robots * num_robots, 0);
  auto link = [&](std::int32_t a, std::int32_t b) {
    if (a == b) return;
    adjacent[static_cast<std::size_t>(a) * num_robots + static_cast<std::size_t>(b)] = 1;
    adjacent[static_cast<std::size_t>(b) * num_robots + static_cast<std::size_t>(a)] = 1;
  };

  const auto& cells = grid.cells_per_axis();
  const std::size_t nx = cells[0];
  const std::size_t ny = grid.dim() == 2 ? cells[1] : 1;
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t c = ix + nx * iy;
      if (ix + 1 < nx) link(owner[c], owner[c + 1]);
      if (iy + 1 < ny) link(owner[c], owner[c + nx]);
    }
  }

  std::vector<std::vector<std::size_t>> sets(num_robots);
  for (std::size_t i = 0; i < num_robots; ++i) {
    for (std::size_t j = 0; j < num_robots; ++j) {
      if (adjacent[i * num_robots + j]) sets[i].push_back(j);
    }
  }
  return sets;
}

Tessellation tessellate(const GridDensity& density, const SwarmState& state, bool with_neighbors,
                        Backend backend) {
  Tessellation t;
  t.owner = assign(*density.grid, state, backend);
  t.stats = masses_and_centroids(t.owner, density, state, backend);
  if (with_neighbors) t.neighbor_sets = neighbors(t.owner, *density.grid, state.size());
  return t;
}

double boundary_point_1d(double x_i, double x_j, double phi_i, double phi_j) {
  const double gap = x_i - x_j;
  if (std::abs(gap) < 1e-12) {
    throw Error(ErrorKind::kDegenerateConfiguration, "boundary of coincident robots is undefined");
  }
  return 0.5 * (x_i + x_j) - (phi_i - phi_j) / gap;
}

double required_range(const SwarmState& state,
                      const std::vector<std::vector<std::size_t>>& neighbor_sets, std::size_t i) {
  double range = 0.0;
  const auto xi = state.position(i);
  for (std::size_t j : neighbor_sets.at(i)) {
    const auto xj = state.position(j);
    double sq = 0.0;
    for (std::size_t k = 0; k < state.dim; ++k) sq += (xj[k] - xi[k]) * (xj[k] - xi[k]);
    range = std::max(range, std::sqrt(sq));
  }
  return range;
}

}  // namespace otcc
