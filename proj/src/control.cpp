#include "otcc/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "otcc/error.hpp"

namespace otcc {

std::string_view to_string(Law law) noexcept { return law == Law::kVtcc ? "vtcc" : "otcc"; }

Law parse_law(std::string_view text) {
  if (text == "vtcc") return Law::kVtcc;
  if (text == "otcc") return Law::kOtcc;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown controller law '" + std::string(text) + "' (expected vtcc or otcc)");
}

void ControllerParams::validate() const {
  if (!(k > 0.0) || !std::isfinite(k)) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  if (!(k_prime >= 0.0) || !std::isfinite(k_prime)) {
    throw Error(ErrorKind::kInvalidArgument, "k_prime must be non-negative");
  }
}

double dual_value(const SwarmState& state, const Tessellation& tess) {
  const std::size_t n = state.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  // Same reference weight as the assignment: F is unchanged by a uniform
  // shift because the (1/n - a_i) sum to zero.
  const double top = *std::max_element(state.weights.begin(), state.weights.end());
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    value += (inv_n - tess.stats.mass[i]) * (state.weights[i] - top) + tess.stats.cost[i];
  }
  return value;
}

std::vector<double> grad_phi(const Tessellation& tess, std::size_t n) {
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = inv_n - tess.stats.mass[i];
  return g;
}

std::vector<double> grad_x(const SwarmState& state, const Tessellation& tess) {
  const std::size_t d = state.dim;
  std::vector<double> g(state.positions.size(), 0.0);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (tess.stats.empty[i]) continue;
    for (std::size_t k = 0; k < d; ++k) {
      g[i * d + k] =
          tess.stats.mass[i] * (state.positions[i * d + k] - tess.stats.centroid[i * d + k]);
    }
  }
  return g;
}

ControlOutput control_step(const SwarmState& state, const Tessellation& tess,
                           const ControllerParams& params) {
  const std::size_t n = state.size();
  const std::size_t d = state.dim;
  ControlOutput out;
  out.grad_x = grad_x(state, tess);
  out.grad_phi = grad_phi(tess, n);
  out.F_value = dual_value(state, tess);

  out.u.resize(n * d);
  for (std::size_t c = 0; c < n * d; ++c) {
    out.u[c] = -params.k * (state.positions[c] - tess.stats.centroid[c]);
  }
  out.phi_dot.assign(n, 0.0);
  if (params.law == Law::kOtcc) {
    for (std::size_t i = 0; i < n; ++i) out.phi_dot[i] = params.k_prime * out.grad_phi[i];
  }
  return out;
}

}  // namespace otcc
