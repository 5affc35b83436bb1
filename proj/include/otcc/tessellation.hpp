#pragma once

#include <cstdint>
#include <vector>

#include "otcc/density.hpp"
#include "otcc/grid.hpp"
#include "otcc/kernels.hpp"
#include "otcc/swarm.hpp"

namespace otcc {

using kernels::Backend;

/// Cells with less target mass than this are treated as empty.
inline constexpr double kEmptyMass = 1e-12;

/// Mass, centroid and transport cost of each robot's region.
struct CellStatistics {
  std::vector<double> mass;      // a_i
  std::vector<double> centroid;  // b_i, dim per robot; x_i for empty cells
  std::vector<double> cost;      // sum over owned cells of 1/2 |x_i - c|^2 m_c
  std::vector<bool> empty;
};

/// Laguerre tessellation of the grid for one swarm state.
struct Tessellation {
  std::vector<std::int32_t> owner;
  CellStatistics stats;
  /// Sorted neighbor indices per robot. Empty unless requested.
  std::vector<std::vector<std::size_t>> neighbor_sets;

  std::size_t size() const noexcept { return stats.mass.size(); }
};

/// Owner of each cell under the power distance 1/2|x_i - y|^2 - phi_i; ties go
/// to the lowest index. Weights enter only through differences, so adding a
/// constant to every weight leaves the result unchanged.
std::vector<std::int32_t> assign(const Grid& grid, const SwarmState& state,
                                 Backend backend = Backend::kParallel);

CellStatistics masses_and_centroids(const std::vector<std::int32_t>& owner,
                                    const GridDensity& density, const SwarmState& state,
                                    Backend backend = Backend::kParallel);

/// Robots whose regions share a grid face (2 neighbors in 1D, 4 in 2D).
std::vector<std::vector<std::size_t>> neighbors(const std::vector<std::int32_t>& owner,
                                                const Grid& grid, std::size_t num_robots);

Tessellation tessellate(const GridDensity& density, const SwarmState& state,
                        bool with_neighbors = true, Backend backend = Backend::kParallel);

/// Point y with 1/2(x_i - y)^2 - phi_i == 1/2(x_j - y)^2 - phi_j.
double boundary_point_1d(double x_i, double x_j, double phi_i, double phi_j);

/// Largest distance from robot i to any of its neighbors; 0 without neighbors.
double required_range(const SwarmState& state,
                      const std::vector<std::vector<std::size_t>>& neighbor_sets, std::size_t i);

}  // namespace otcc
