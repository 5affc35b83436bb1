#include "otcc/kernels.hpp"

#include <algorithm>
#include <limits>

namespace otcc::kernels {
namespace {

// The 1D and 2D loops are spelled out so the compiler can keep the robot
// coordinates in registers; the generic path covers anything else.
inline std::int32_t argmin_cell(const double* c, std::size_t dim, const double* x, const double* w,
                                std::size_t n) {
  std::int32_t best = 0;
  double best_cost = std::numeric_limits<double>::infinity();
  if (dim == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = x[i] - c[0];
      const double cost = 0.5 * d * d - w[i];
      if (cost < best_cost) {
        best_cost = cost;
        best = static_cast<std::int32_t>(i);
      }
    }
  } else if (dim == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = x[2 * i] - c[0];
      const double d1 = x[2 * i + 1] - c[1];
      const double cost = 0.5 * (d0 * d0 + d1 * d1) - w[i];
      if (cost < best_cost) {
        best_cost = cost;
        best = static_cast<std::int32_t>(i);
      }
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double sq = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        const double d = x[i * dim + k] - c[k];
        sq += d * d;
      }
      const double cost = 0.5 * sq - w[i];
      if (cost < best_cost) {
        best_cost = cost;
        best = static_cast<std::int32_t>(i);
      }
    }
  }
  return best;
}

CellSums make_sums(std::size_t n, std::size_t dim) {
  return CellSums{std::vector<double>(n, 0.0), std::vector<double>(n * dim, 0.0),
                  std::vector<double>(n, 0.0)};
}

inline void accumulate_range(std::span<const double> centers, std::size_t dim,
                             std::span<const double> cell_mass,
                             std::span<const std::int32_t> owner,
                             std::span<const double> positions, std::size_t begin,
                             std::size_t end, CellSums& out) {
  for (std::size_t c = begin; c < end; ++c) {
    const auto i = static_cast<std::size_t>(owner[c]);
    const double m = cell_mass[c];
    const double* y = centers.data() + c * dim;
    const double* x = positions.data() + i * dim;
    double sq = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double d = x[k] - y[k];
      sq += d * d;
      out.moment[i * dim + k] += m * y[k];
    }
    out.mass[i] += m;
    out.cost[i] += 0.5 * sq * m;
  }
}

}  // namespace

namespace serial {

void assign_owners(std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner) {
  const std::size_t n = weights.size();
  const std::size_t cells = owner.size();
  for (std::size_t c = 0; c < cells; ++c) {
    owner[c] = argmin_cell(centers.data() + c * dim, dim, positions.data(), weights.data(), n);
  }
}

CellSums accumulate_cells(std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions) {
  CellSums out = make_sums(positions.size() / dim, dim);
  accumulate_range(centers, dim, cell_mass, owner, positions, 0, owner.size(), out);
  return out;
}

}  // namespace serial

namespace parallel {

void assign_owners(std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner) {
  const std::size_t n = weights.size();
  const auto cells = static_cast<std::ptrdiff_t>(owner.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t c = 0; c < cells; ++c) {
    owner[c] = argmin_cell(centers.data() + c * dim, dim, positions.data(), weights.data(), n);
  }
}

CellSums accumulate_cells(std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions) {
  const std::size_t n = positions.size() / dim;
  const std::size_t cells = owner.size();
  const std::size_t blocks = (cells + kReduceBlock - 1) / kReduceBlock;
  std::vector<CellSums> partial(blocks);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * kReduceBlock;
    const std::size_t end = std::min(cells, begin + kReduceBlock);
    partial[b] = make_sums(n, dim);
    accumulate_range(centers, dim, cell_mass, owner, positions, begin, end, partial[b]);
  }

  CellSums out = make_sums(n, dim);
  for (const CellSums& p : partial) {
    for (std::size_t i = 0; i < n; ++i) {
      out.mass[i] += p.mass[i];
      out.cost[i] += p.cost[i];
    }
    for (std::size_t k = 0; k < n * dim; ++k) out.moment[k] += p.moment[k];
  }
  return out;
}

}  // namespace parallel

void assign_owners(Backend backend, std::span<const double> centers, std::size_t dim,
                   std::span<const double> positions, std::span<const double> weights,
                   std::span<std::int32_t> owner) {
  if (backend == Backend::kSerial) {
    serial::assign_owners(centers, dim, positions, weights, owner);
  } else {
    parallel::assign_owners(centers, dim, positions, weights, owner);
  }
}

CellSums accumulate_cells(Backend backend, std::span<const double> centers, std::size_t dim,
                          std::span<const double> cell_mass, std::span<const std::int32_t> owner,
                          std::span<const double> positions) {
  return backend == Backend::kSerial
             ? serial::accumulate_cells(centers, dim, cell_mass, owner, positions)
             : parallel::accumulate_cells(centers, dim, cell_mass, owner, positions);
}

}  // namespace otcc::kernels
