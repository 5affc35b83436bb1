#pragma once

// Per-cell kernels behind the tessellation. Each kernel has a serial reference
// and an OpenMP version. `assign_owners` is bit-identical between the two.
// `accumulate_cells` in the OpenMP version reduces over fixed-size cell blocks
// and combines the blocks in index order, so its result does not depend on the
// thread count; it agrees with the serial loop to rounding.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace otcc::kernels {

enum class Backend { kSerial, kParallel };

/// Cells per reduction block in the parallel accumulate.
inline constexpr std::size_t kReduceBlock = 1024;

/// Per-robot sums over owned cells.
struct CellSums {
  std::vector<double> mass;    // sum m_c
  std::vector<double> moment;  // sum m_c * c, dim per robot
  std::vector<double> cost;    // sum 1/2 |x_i - c|^2 m_c
};

/// owner[c] = argmin_i 1/2 |x_i - c|^2 - w_i, lowest index on ties.
void assign_owners(Backend backend, std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner);

CellSums accumulate_cells(Backend backend, std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions);

namespace serial {
void assign_owners(std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner);
CellSums accumulate_cells(std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions);
}  // namespace serial

namespace parallel {
void assign_owners(std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner);
CellSums accumulate_cells(std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions);
}  // namespace parallel

}  // namespace otcc::kernels
