#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace otcc {

/// Robot positions x_i and dual weights phi_i at one instant.
struct SwarmState {
  std::size_t dim = 1;
  std::vector<double> positions;  // size() * dim, robot-major
  std::vector<double> weights;    // one per robot
  double time = 0.0;

  SwarmState() = default;
  SwarmState(std::size_t d, std::vector<double> pos, std::vector<double> w = {}, double t = 0.0);

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> position(std::size_t i) const { return {positions.data() + i * dim, dim}; }
  std::span<double> position(std::size_t i) { return {positions.data() + i * dim, dim}; }

  /// Throws if n == 0, sizes disagree, or two robots are closer than 1e-12.
  void validate() const;
};

}  // namespace otcc
