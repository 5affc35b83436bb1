#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "otcc/density.hpp"
#include "otcc/simulate.hpp"
#include "otcc/swarm.hpp"

namespace otcc {

/// 1D target density truncated to an interval and renormalized there.
class TruncatedDensity1d {
 public:
  TruncatedDensity1d(const Density& density, double lower, double upper);

  double pdf(double y) const;
  double cdf(double y) const;
  /// Smallest y with cdf(y) >= p, by bisection to a CDF residual below 1e-10.
  double quantile(double p) const;
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  Density density_;
  double lower_;
  double upper_;
  double cdf_lower_;
  double mass_;
};

/// Coverage cost J: sum_i over region i of 1/2 |y - x_i|^2 rho_T(y). Voronoi
/// regions when `at_voronoi`, otherwise the state's Laguerre regions.
double cost_J(const SwarmState& state, const GridDensity& density, bool at_voronoi);

enum class HessianMode { kClosedForm1d, kFiniteDifference };

Eigen::MatrixXd hessian_phi(const SwarmState& state, const GridDensity& grid_density,
                            const Density& density, HessianMode mode);

Eigen::MatrixXd hessian_x(const SwarmState& state, const GridDensity& grid_density,
                          const Density& density, HessianMode mode);

struct DefinitenessCheck {
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
  bool positive_definite = false;
};

inline constexpr double kDefinitenessThreshold = 1e-8;

DefinitenessCheck pd_check(const Eigen::MatrixXd& matrix);

/// Stability index of the 1D Gershgorin argument, per robot (input order).
struct HIndex {
  std::vector<double> paper_literal;
  std::vector<double> derived;
  double paper_literal_max = 0.0;
  double derived_max = 0.0;
};

HIndex h_index(const SwarmState& state, const Density& density, const Workspace& workspace);

/// Semi-discrete transport cost to the truncated 1D density by quantile
/// splitting and composite Gauss-Legendre quadrature.
double wasserstein_1d(std::vector<double> positions, const Density& density,
                      const Workspace& workspace, std::size_t panels = 20000);

struct DualityGap {
  double max_F = 0.0;
  double oracle_W = 0.0;
  double gap = 0.0;
  std::size_t steps = 0;
  bool converged = false;
  /// max |grad_phi| at the last ascent iterate.
  double final_grad = 0.0;
  /// F after every ascent step.
  std::vector<double> ascent_values;
};

/// True when the last 10 entries of an ascent history each dropped below
/// their predecessor.
bool ascent_diverging(const std::vector<double>& values);

/// Step for duality_gap_1d: 1/8 of the inverse of the stiffest weight
/// coupling rho(midpoint) / gap between sorted neighbors.
double ascent_rate_1d(const std::vector<double>& positions, const Density& density,
                      const Workspace& workspace);
/// Gradient ascent on the weights with positions fixed; compares the best F
/// reached against `wasserstein_1d`.
DualityGap duality_gap_1d(const std::vector<double>& positions, const Density& density,
                          const GridDensity& grid_density, std::size_t ascent_steps,
                          double ascent_rate);

/// A flip of one cell changes F by at most (largest cell mass) * diameter^2.
double monotonicity_tolerance(const GridDensity& density);

struct MonotonicityReport {
  std::size_t checked_steps = 0;
  std::size_t x_descent_violations = 0;
  std::size_t phi_ascent_violations = 0;
  std::size_t cost_increase_violations = 0;
  double worst_x_violation = 0.0;    // max of F(x+, phi) - F(x, phi)
  double worst_phi_violation = 0.0;  // max of F(x, phi) - F(x, phi+)
  double worst_cost_increase = 0.0;  // max of J(next record) - J(record)
  double tolerance = 0.0;

  std::size_t total_violations() const {
    return x_descent_violations + phi_ascent_violations + cost_increase_violations;
  }
};

/// `check_cost` adds the record-to-record J check (meaningful for vtcc).
MonotonicityReport monotonicity_audit(const TrajectoryRecord& trajectory, double tolerance,
                                      bool check_cost);

struct StabilityReport {
  double max_centroid_residual = 0.0;  // max_i |x_i - b_i|
  double max_mass_residual = 0.0;      // max_i |a_i - 1/n|
  Eigen::MatrixXd hessian_x;
  Eigen::MatrixXd hessian_phi;
  double min_eig_hessian_x = 0.0;
  double max_eig_hessian_phi = 0.0;
  bool hessian_x_positive_definite = false;
  HIndex h;                  // only for d = 1
  bool lyapunov_stable_flag = false;
};

/// Finite-difference Hessians everywhere; h-index and the stability flag
/// from the derived form in 1D, from positive definiteness otherwise.
StabilityReport stability_report(const SwarmState& state, const GridDensity& grid_density,
                                 const Density& density);

}  // namespace otcc
