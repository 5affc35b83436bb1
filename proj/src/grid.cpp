#include "otcc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otcc/error.hpp"

namespace otcc {

double Workspace::diameter() const {
  double sq = 0.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    const double w = upper[k] - lower[k];
    sq += w * w;
  }
  return std::sqrt(sq);
}

bool Workspace::contains(std::span<const double> point) const {
  if (point.size() != dim()) return false;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!(point[k] >= lower[k] && point[k] <= upper[k])) return false;
  }
  return true;
}

void Workspace::validate() const {
  if (lower.size() != upper.size()) {
    throw Error(ErrorKind::kInvalidArgument, "workspace bounds have different lengths");
  }
  if (dim() != 1 && dim() != 2) {
    throw Error(ErrorKind::kUnsupportedDimension,
                "workspace dimension " + std::to_string(dim()) + " (supported: 1, 2)");
  }
  for (std::size_t k = 0; k < dim(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]) || !(lower[k] < upper[k])) {
      throw Error(ErrorKind::kInvalidArgument,
                  "workspace axis " + std::to_string(k) + " needs lower < upper");
    }
  }
}

Grid::Grid(Workspace workspace, std::vector<std::size_t> cells_per_axis)
    : workspace_(std::move(workspace)), cells_(std::move(cells_per_axis)) {
  workspace_.validate();
  if (cells_.size() != workspace_.dim()) {
    throw Error(ErrorKind::kInvalidArgument, "cells_per_axis length must match the dimension");
  }
  num_cells_ = 1;
  cell_volume_ = 1.0;
  for (std::size_t k = 0; k < dim(); ++k) {
    if (cells_[k] == 0) throw Error(ErrorKind::kInvalidArgument, "cells_per_axis must be positive");
    num_cells_ *= cells_[k];
    spacing_.push_back((workspace_.upper[k] - workspace_.lower[k]) / static_cast<double>(cells_[k]));
    cell_volume_ *= spacing_.back();
  }

  centers_.resize(num_cells_ * dim());
  for (std::size_t c = 0; c < num_cells_; ++c) {
    std::size_t rest = c;
    for (std::size_t k = 0; k < dim(); ++k) {
      const std::size_t idx = rest % cells_[k];
      rest /= cells_[k];
      // Offsets from the box middle are half-integers times the spacing, so
      // mirrored cells get exactly negated offsets.
      const double mid = 0.5 * (workspace_.lower[k] + workspace_.upper[k]);
      const double offset = static_cast<double>(idx) - 0.5 * static_cast<double>(cells_[k] - 1);
      centers_[c * dim() + k] = mid + offset * spacing_[k];
    }
  }
}

double Grid::min_spacing() const { return *std::min_element(spacing_.begin(), spacing_.end()); }

}  // namespace otcc
