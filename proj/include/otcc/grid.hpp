#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace otcc {

/// Axis-aligned box. Only d = 1 and d = 2 are supported.
struct Workspace {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const noexcept { return lower.size(); }
  double diameter() const;
  bool contains(std::span<const double> point) const;
  void validate() const;
};

/// Regular cell-centered discretization of a workspace. Cell index runs with
/// axis 0 fastest: c = i0 + cells[0] * i1.
class Grid {
 public:
  Grid(Workspace workspace, std::vector<std::size_t> cells_per_axis);

  const Workspace& workspace() const noexcept { return workspace_; }
  std::size_t dim() const noexcept { return workspace_.dim(); }
  std::size_t num_cells() const noexcept { return num_cells_; }
  const std::vector<std::size_t>& cells_per_axis() const noexcept { return cells_; }
  double spacing(std::size_t axis) const { return spacing_[axis]; }
  double min_spacing() const;
  double cell_volume() const noexcept { return cell_volume_; }

  /// Flattened cell centers, `dim()` values per cell.
  std::span<const double> centers() const noexcept { return centers_; }
  std::span<const double> center(std::size_t cell) const {
    return {centers_.data() + cell * dim(), dim()};
  }

 private:
  Workspace workspace_;
  std::vector<std::size_t> cells_;
  std::vector<double> spacing_;
  std::vector<double> centers_;
  std::size_t num_cells_ = 0;
  double cell_volume_ = 0.0;
};

}  // namespace otcc
