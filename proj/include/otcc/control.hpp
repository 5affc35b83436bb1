#pragma once

#include <string_view>
#include <vector>

#include "otcc/swarm.hpp"
#include "otcc/tessellation.hpp"

namespace otcc {

/// vtcc is otcc with the weights frozen at their initial values.
enum class Law { kVtcc, kOtcc };

std::string_view to_string(Law law) noexcept;
Law parse_law(std::string_view text);

struct ControllerParams {
  Law law = Law::kOtcc;
  double k = 0.5;        // position gain
  double k_prime = 0.0;  // weight ascent gain

  void validate() const;
};

struct ControlOutput {
  std::vector<double> u;         // dim per robot
  std::vector<double> phi_dot;
  std::vector<double> grad_x;    // dim per robot
  std::vector<double> grad_phi;
  double F_value = 0.0;
};

/// Semi-discrete dual F(x, phi) = sum_i (1/n - a_i) phi_i + transport cost.
double dual_value(const SwarmState& state, const Tessellation& tess);

/// dF/dphi_i = 1/n - a_i.
std::vector<double> grad_phi(const Tessellation& tess, std::size_t n);

/// dF/dx_i = a_i (x_i - b_i); zero for empty cells.
std::vector<double> grad_x(const SwarmState& state, const Tessellation& tess);

ControlOutput control_step(const SwarmState& state, const Tessellation& tess,
                           const ControllerParams& params);

}  // namespace otcc
