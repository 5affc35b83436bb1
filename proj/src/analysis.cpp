#include "otcc/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "otcc/error.hpp"
#include "otcc/symmetric_eigen.hpp"
#include "otcc/tessellation.hpp"

namespace otcc {
namespace {

void require_1d(std::size_t dim, const char* what) {
  if (dim != 1) {
    throw Error(ErrorKind::kUnsupportedDimension,
                std::string(what) + " needs d = 1, got d = " + std::to_string(dim));
  }
}

std::vector<std::size_t> sorted_order(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  return order;
}

/// Boundary geometry between two robots adjacent on the line.
struct Interface1d {
  double point;      // m_ij
  double dm_dxi;     // dm_ij / dx_i
  double dm_dxj;     // dm_ij / dx_j
  double density;    // truncated rho_T(m_ij)
};

Interface1d interface_1d(const TruncatedDensity1d& rho, double xi, double xj, double phi_i,
                         double phi_j) {
  const double gap = xi - xj;
  const double m = boundary_point_1d(xi, xj, phi_i, phi_j);
  const double slope = (phi_i - phi_j) / (gap * gap);
  return {m, 0.5 + slope, 0.5 - slope, rho.pdf(m)};
}

std::vector<double> grad_phi_at(const GridDensity& density, const SwarmState& state) {
  return grad_phi(tessellate(density, state, false), state.size());
}

std::vector<double> grad_x_at(const GridDensity& density, const SwarmState& state) {
  return grad_x(state, tessellate(density, state, false));
}

// Composite 4-point Gauss-Legendre on [a, b].
template <typename F>
double integrate(F&& f, double a, double b, std::size_t panels) {
  static constexpr std::array<double, 4> kNodes = {-0.8611363115940526, -0.3399810435848563,
                                                   0.3399810435848563, 0.8611363115940526};
  static constexpr std::array<double, 4> kWeights = {0.3478548451374538, 0.6521451548625461,
                                                     0.6521451548625461, 0.3478548451374538};
  if (!(b > a)) return 0.0;
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (static_cast<double>(p) + 0.5) * width;
    double panel = 0.0;
    for (std::size_t q = 0; q < kNodes.size(); ++q) panel += kWeights[q] * f(mid + 0.5 * width * kNodes[q]);
    total += 0.5 * width * panel;
  }
  return total;
}

}  // namespace

TruncatedDensity1d::TruncatedDensity1d(const Density& density, double lower, double upper)
    : density_(density), lower_(lower), upper_(upper) {
  require_1d(density.dim(), "truncated density");
  cdf_lower_ = density.cdf_1d(lower);
  mass_ = density.cdf_1d(upper) - cdf_lower_;
  if (!(mass_ > 0.0)) throw Error(ErrorKind::kDegenerateDensity, "density has no mass on the interval");
}

double TruncatedDensity1d::pdf(double y) const {
  if (y < lower_ || y > upper_) return 0.0;
  return density_.eval(y) / mass_;
}

double TruncatedDensity1d::cdf(double y) const {
  if (y <= lower_) return 0.0;
  if (y >= upper_) return 1.0;
  return std::clamp((density_.cdf_1d(y) - cdf_lower_) / mass_, 0.0, 1.0);
}

double TruncatedDensity1d::quantile(double p) const {
  double lo = lower_;
  double hi = upper_;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double c = cdf(mid);
    if (std::abs(c - p) < 1e-10 || hi - lo < 1e-15 * (upper_ - lower_)) return mid;
    (c < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double cost_J(const SwarmState& state, const GridDensity& density, bool at_voronoi) {
  SwarmState regions = state;
  if (at_voronoi) std::fill(regions.weights.begin(), regions.weights.end(), 0.0);
  const Tessellation tess = tessellate(density, regions, false);
  double total = 0.0;
  for (double c : tess.stats.cost) total += c;
  return total;
}

namespace {

// Diagonal from the off-diagonal row sums, so rows sum to zero exactly.
void zero_row_sums(Eigen::MatrixXd& h) {
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    double sum = 0.0;
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      if (c != r) sum += h(r, c);
    }
    h(r, r) = -sum;
  }
}

}  // namespace

Eigen::MatrixXd hessian_phi(const SwarmState& state, const GridDensity& grid_density,
                            const Density& density, HessianMode mode) {
  state.validate();
  const std::size_t n = state.size();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  if (n == 1) return h;
  const Grid& grid = *grid_density.grid;

  if (mode == HessianMode::kClosedForm1d) {
    require_1d(state.dim, "closed-form weight Hessian");
    const TruncatedDensity1d rho(density, grid.workspace().lower[0], grid.workspace().upper[0]);
    const auto order = sorted_order(state.positions);
    for (std::size_t p = 0; p + 1 < n; ++p) {
      const std::size_t i = order[p];
      const std::size_t j = order[p + 1];
      const double xi = state.positions[i];
      const double xj = state.positions[j];
      const Interface1d f = interface_1d(rho, xi, xj, state.weights[i], state.weights[j]);
      const double w = f.density / std::abs(xj - xi);
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      h(a, b) += w;
      h(b, a) += w;
    }
    zero_row_sums(h);
    return h;
  }

  // Step so each boundary of robot j moves across a few cells.
  const auto sets = neighbors(assign(grid, state), grid, n);
  const double h_cell = grid.min_spacing();
  for (std::size_t j = 0; j < n; ++j) {
    double dist = 0.0;
    for (std::size_t k : sets[j]) {
      double sq = 0.0;
      for (std::size_t a = 0; a < state.dim; ++a) {
        const double d = state.positions[j * state.dim + a] - state.positions[k * state.dim + a];
        sq += d * d;
      }
      dist += std::sqrt(sq);
    }
    dist = sets[j].empty() ? grid.workspace().diameter() / static_cast<double>(n)
                           : dist / static_cast<double>(sets[j].size());
    const double delta = 4.0 * h_cell * dist;

    SwarmState plus = state;
    SwarmState minus = state;
    plus.weights[j] += delta;
    minus.weights[j] -= delta;
    const auto gp = grad_phi_at(grid_density, plus);
    const auto gm = grad_phi_at(grid_density, minus);
    for (std::size_t i = 0; i < n; ++i) {
      h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (gp[i] - gm[i]) / (2.0 * delta);
    }
  }
  // A uniform weight shift leaves every cell unchanged, so H 1 = 0 holds exactly.
  // Differenced diagonals pick up cell-flip noise; rebuild them from the row sums.
  h = (0.5 * (h + h.transpose())).eval();
  zero_row_sums(h);
  return h;
}

Eigen::MatrixXd hessian_x(const SwarmState& state, const GridDensity& grid_density,
                          const Density& density, HessianMode mode) {
  state.validate();
  const std::size_t n = state.size();
  const std::size_t d = state.dim;
  const auto size = static_cast<Eigen::Index>(n * d);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(size, size);
  const Grid& grid = *grid_density.grid;

  if (mode == HessianMode::kClosedForm1d) {
    require_1d(d, "closed-form position Hessian");
    const TruncatedDensity1d rho(density, grid.workspace().lower[0], grid.workspace().upper[0]);
    const auto order = sorted_order(state.positions);
    std::vector<double> lower_edge(n, rho.lower());
    std::vector<double> upper_edge(n, rho.upper());

    for (std::size_t p = 0; p + 1 < n; ++p) {
      const std::size_t i = order[p];      // left robot
      const std::size_t j = order[p + 1];  // right robot
      const double xi = state.positions[i];
      const double xj = state.positions[j];
      const Interface1d f = interface_1d(rho, xi, xj, state.weights[i], state.weights[j]);
      upper_edge[i] = f.point;
      lower_edge[j] = f.point;
      const auto a = static_cast<Eigen::Index>(i);
      const auto b = static_cast<Eigen::Index>(j);
      // Robot i integrates (x_i - y) up to m, robot j from m.
      h(a, a) += (xi - f.point) * f.density * f.dm_dxi;
      h(a, b) += (xi - f.point) * f.density * f.dm_dxj;
      h(b, b) -= (xj - f.point) * f.density * f.dm_dxj;
      h(b, a) -= (xj - f.point) * f.density * f.dm_dxi;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = std::clamp(lower_edge[i], rho.lower(), rho.upper());
      const double hi = std::clamp(upper_edge[i], rho.lower(), rho.upper());
      const auto a = static_cast<Eigen::Index>(i);
      h(a, a) += std::max(0.0, rho.cdf(hi) - rho.cdf(lo));
    }
    return h;
  }

  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const double delta = 2.0 * grid.spacing(k);
      const std::size_t col = j * d + k;
      SwarmState plus = state;
      SwarmState minus = state;
      plus.positions[col] += delta;
      minus.positions[col] -= delta;
      const auto gp = grad_x_at(grid_density, plus);
      const auto gm = grad_x_at(grid_density, minus);
      for (std::size_t r = 0; r < n * d; ++r) {
        h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(col)) = (gp[r] - gm[r]) / (2.0 * delta);
      }
    }
  }
  return 0.5 * (h + h.transpose());
}

DefinitenessCheck pd_check(const Eigen::MatrixXd& matrix) {
  if (!matrix.allFinite()) throw Error(ErrorKind::kInvalidArgument, "matrix has non-finite entries");
  const SymmetricEigen eig = jacobi_eigen(matrix);
  DefinitenessCheck out;
  if (eig.values.size() == 0) return out;
  out.min_eigenvalue = eig.values.minCoeff();
  out.max_eigenvalue = eig.values.maxCoeff();
  out.positive_definite = out.min_eigenvalue > kDefinitenessThreshold;
  return out;
}

HIndex h_index(const SwarmState& state, const Density& density, const Workspace& workspace) {
  require_1d(state.dim, "h index");
  state.validate();
  const std::size_t n = state.size();
  const TruncatedDensity1d rho(density, workspace.lower[0], workspace.upper[0]);
  const auto order = sorted_order(state.positions);
  const double count = static_cast<double>(n);

  HIndex out;
  out.paper_literal.assign(n, 0.0);
  out.derived.assign(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t i = order[p];
    for (std::size_t q : {p - 1, p + 1}) {
      if (q >= n) continue;  // p - 1 wraps for p == 0
      const std::size_t j = order[q];
      const double xi = state.positions[i];
      const double xj = state.positions[j];
      const double phi_i = state.weights[i];
      const double phi_j = state.weights[j];

      // Printed conventions: halved differences and half sum.
      const double half_gap = 0.5 * (xi - xj);
      const double half_dphi = 0.5 * (phi_i - phi_j);
      const double half_sum = 0.5 * (xi + xj);
      out.paper_literal[i] += 2.0 * count * std::abs(half_gap / 2.0 + half_dphi / half_gap) *
                              (0.5 + std::abs(half_dphi) / (half_gap * half_gap)) *
                              rho.pdf(half_sum / 2.0 - half_dphi / half_gap);

      // Gershgorin row of the closed-form Hessian with a_i = 1/n.
      const Interface1d f = interface_1d(rho, xi, xj, phi_i, phi_j);
      out.derived[i] +=
          count * std::abs(xi - f.point) * (std::abs(f.dm_dxi) + std::abs(f.dm_dxj)) * f.density;
    }
  }
  out.paper_literal_max = *std::max_element(out.paper_literal.begin(), out.paper_literal.end());
  out.derived_max = *std::max_element(out.derived.begin(), out.derived.end());
  return out;
}

double wasserstein_1d(std::vector<double> positions, const Density& density,
                      const Workspace& workspace, std::size_t panels) {
  require_1d(density.dim(), "wasserstein_1d");
  require_1d(workspace.dim(), "wasserstein_1d");
  if (positions.empty()) throw Error(ErrorKind::kInvalidArgument, "no positions");
  std::sort(positions.begin(), positions.end());
  const TruncatedDensity1d rho(density, workspace.lower[0], workspace.upper[0]);
  const std::size_t n = positions.size();
  const double length = rho.upper() - rho.lower();

  double total = 0.0;
  double left = rho.lower();
  for (std::size_t k = 0; k < n; ++k) {
    const double right =
        k + 1 == n ? rho.upper() : rho.quantile(static_cast<double>(k + 1) / static_cast<double>(n));
    const auto segment_panels = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(static_cast<double>(panels) * (right - left) / length)));
    const double x = positions[k];
    total += integrate([&](double y) { return 0.5 * (y - x) * (y - x) * rho.pdf(y); }, left, right,
                       segment_panels);
    left = right;
  }
  return total;
}

double ascent_rate_1d(const std::vector<double>& positions, const Density& density,
                      const Workspace& ws) {
  std::vector<double> x = positions;
  std::sort(x.begin(), x.end());
  const TruncatedDensity1d rho(density, ws.lower[0], ws.upper[0]);
  double stiffest = 0.0;
  for (std::size_t p = 0; p + 1 < x.size(); ++p) {
    stiffest = std::max(stiffest, rho.pdf(0.5 * (x[p] + x[p + 1])) / (x[p + 1] - x[p]));
  }
  return stiffest > 0.0 ? 0.5 / (4.0 * stiffest) : 1.0;
}

bool ascent_diverging(const std::vector<double>& values) {
  constexpr std::size_t kRun = 10;
  if (values.size() < kRun + 1) return false;
  for (std::size_t k = values.size() - kRun; k < values.size(); ++k) {
    if (!(values[k] < values[k - 1])) return false;
  }
  return true;
}

DualityGap duality_gap_1d(const std::vector<double>& positions, const Density& density,
                          const GridDensity& grid_density, std::size_t ascent_steps,
                          double ascent_rate) {
  require_1d(density.dim(), "duality_gap_1d");
  if (!(ascent_rate > 0.0)) throw Error(ErrorKind::kInvalidArgument, "ascent rate must be positive");
  SwarmState state(1, positions);
  const std::size_t n = state.size();
  const double target = 1e-3 / static_cast<double>(n);

  DualityGap out;
  out.max_F = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0;; ++s) {
    const Tessellation tess = tessellate(grid_density, state, false);
    const double F = dual_value(state, tess);
    out.ascent_values.push_back(F);
    out.max_F = std::max(out.max_F, F);
    if (ascent_diverging(out.ascent_values)) {
      throw Error(ErrorKind::kAscentFailure,
                  "F decreased for 10 consecutive ascent steps (step " + std::to_string(s) + ")");
    }

    const auto g = grad_phi(tess, n);
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, std::abs(v));
    out.steps = s;
    out.final_grad = worst;
    if (worst < target) {
      out.converged = true;
      break;
    }
    if (s >= ascent_steps) break;
    for (std::size_t i = 0; i < n; ++i) state.weights[i] += ascent_rate * g[i];
  }

  const Grid& grid = *grid_density.grid;
  out.oracle_W = wasserstein_1d(positions, density, grid.workspace(), 10 * grid.num_cells());
  out.gap = std::abs(out.max_F - out.oracle_W);
  return out;
}

double monotonicity_tolerance(const GridDensity& density) {
  const double diam = density.grid->workspace().diameter();
  return density.max_cell_mass() * diam * diam;
}

MonotonicityReport monotonicity_audit(const TrajectoryRecord& trajectory, double tolerance,
                                      bool check_cost) {
  MonotonicityReport report;
  report.tolerance = tolerance;
  report.checked_steps = trajectory.probes.size();
  for (const auto& p : trajectory.probes) {
    const double up = p.F_moved_x - p.F;
    const double down = p.F - p.F_moved_phi;
    report.worst_x_violation = std::max(report.worst_x_violation, up);
    report.worst_phi_violation = std::max(report.worst_phi_violation, down);
    if (up > tolerance) ++report.x_descent_violations;
    if (down > tolerance) ++report.phi_ascent_violations;
  }
  if (check_cost) {
    for (std::size_t r = 1; r < trajectory.snapshots.size(); ++r) {
      const double rise = trajectory.snapshots[r].J - trajectory.snapshots[r - 1].J;
      report.worst_cost_increase = std::max(report.worst_cost_increase, rise);
      if (rise > tolerance) ++report.cost_increase_violations;
    }
  }
  return report;
}

StabilityReport stability_report(const SwarmState& state, const GridDensity& grid_density,
                                 const Density& density) {
  const Tessellation tess = tessellate(grid_density, state, false);
  const std::size_t n = state.size();
  const std::size_t d = state.dim;
  StabilityReport r;
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double diff = state.positions[i * d + k] - tess.stats.centroid[i * d + k];
      sq += diff * diff;
    }
    r.max_centroid_residual = std::max(r.max_centroid_residual, std::sqrt(sq));
    r.max_mass_residual =
        std::max(r.max_mass_residual, std::abs(tess.stats.mass[i] - 1.0 / static_cast<double>(n)));
  }
  r.hessian_x = hessian_x(state, grid_density, density, HessianMode::kFiniteDifference);
  r.hessian_phi = hessian_phi(state, grid_density, density, HessianMode::kFiniteDifference);
  const DefinitenessCheck px = pd_check(r.hessian_x);
  r.min_eig_hessian_x = px.min_eigenvalue;
  r.hessian_x_positive_definite = px.positive_definite;
  r.max_eig_hessian_phi = pd_check(r.hessian_phi).max_eigenvalue;
  if (d == 1) {
    r.h = h_index(state, density, grid_density.grid->workspace());
    r.lyapunov_stable_flag = r.h.derived_max < 1.0;
  } else {
    r.lyapunov_stable_flag = px.positive_definite;
  }
  return r;
}

}  // namespace otcc
