#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "otcc/analysis.hpp"
#include "otcc/error.hpp"
#include "otcc/symmetric_eigen.hpp"

using namespace otcc;

namespace {

Density normal3() { return Density::gaussian({0.0}, {3.0}); }

struct Line {
  Grid grid{{{-10.0}, {10.0}}, {2000}};
  Density density = normal3();
  GridDensity gd = discretize(density, grid);
};

Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = z(rng);
  }
  return a + a.transpose();
}

}  // namespace

TEST(CostJ, SingleRobot) {
  Line l;
  const SwarmState s(1, {-2.0});
  double ref = 0.0;
  for (std::size_t c = 0; c < l.grid.num_cells(); ++c) {
    const double d = l.grid.center(c)[0] + 2.0;
    ref += 0.5 * d * d * l.gd.cell_mass[c];
  }
  EXPECT_NEAR(cost_J(s, l.gd, true), ref, 1e-12);
  EXPECT_NEAR(cost_J(s, l.gd, false), ref, 1e-12);
}

TEST(CostJ, VoronoiIgnoresWeights) {
  Line l;
  const SwarmState a(1, {-2.0, 1.0, 3.0}, {0.4, -0.2, 0.0});
  const SwarmState b(1, {-2.0, 1.0, 3.0});
  EXPECT_EQ(cost_J(a, l.gd, true), cost_J(b, l.gd, true));
  // Voronoi regions minimize the cost for fixed positions
  EXPECT_LE(cost_J(a, l.gd, true), cost_J(a, l.gd, false));
}

TEST(Wasserstein, UniformOracles) {
  const Workspace unit{{0.0}, {1.0}};
  const Density u = Density::uniform({0.0}, {1.0});
  EXPECT_NEAR(wasserstein_1d({0.5}, u, unit), 1.0 / 24.0, 1e-12);
  EXPECT_NEAR(wasserstein_1d({0.25, 0.75}, u, unit), 1.0 / 96.0, 1e-12);
}

TEST(Wasserstein, PermutationInvariant) {
  const Workspace ws{{-10.0}, {10.0}};
  const Density d = normal3();
  std::vector<double> x = {-3.0, 2.5, -0.5, 1.0, 4.0};
  const double w = wasserstein_1d(x, d, ws);
  std::sort(x.begin(), x.end());
  do {
    EXPECT_EQ(wasserstein_1d(x, d, ws), w);
  } while (std::next_permutation(x.begin(), x.end()));
}

TEST(Wasserstein, SingleRobotIsHalfSecondMoment) {
  const Workspace ws{{-10.0}, {10.0}};
  // truncation mass beyond 10/sqrt(3) sigma is ~1e-8
  EXPECT_NEAR(wasserstein_1d({1.0}, normal3(), ws), 0.5 * (3.0 + 1.0), 1e-6);
}

TEST(Wasserstein, RejectsTwoDimensions) {
  const Workspace ws{{-1.0, -1.0}, {1.0, 1.0}};
  try {
    wasserstein_1d({0.0}, Density::uniform({-1.0, -1.0}, {1.0, 1.0}), ws);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedDimension);
  }
}

TEST(TruncatedDensity, QuantileInvertsCdf) {
  const TruncatedDensity1d rho(Density::gaussian({1.0}, {2.0}), -3.0, 6.0);
  for (double p : {0.01, 0.2, 0.5, 0.77, 0.999}) EXPECT_NEAR(rho.cdf(rho.quantile(p)), p, 1e-10);
  EXPECT_EQ(rho.pdf(-4.0), 0.0);
  EXPECT_EQ(rho.cdf(7.0), 1.0);
}

TEST(DualityGap, SingleRobot) {
  Line l;
  const DualityGap g = duality_gap_1d({0.7}, l.density, l.gd, 100, 1.0);
  EXPECT_TRUE(g.converged);
  EXPECT_LT(g.gap, 1e-6);
}

TEST(DualityGap, UniformPair) {
  Grid g({{0.0}, {1.0}}, {1000});
  const Density u = Density::uniform({0.0}, {1.0});
  const GridDensity gd = discretize(u, g);
  const std::vector<double> x = {0.25, 0.75};
  const DualityGap r = duality_gap_1d(x, u, gd, 5000, ascent_rate_1d(x, u, g.workspace()));
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.max_F, 1.0 / 96.0, 1e-4);
  EXPECT_LT(r.gap, 1e-4);
}

TEST(DualityGap, FiveRobotsGaussian) {
  Line l;
  const std::vector<double> x = {-4.0, -1.2, 0.3, 0.9, 5.5};
  const DualityGap r = duality_gap_1d(x, l.density, l.gd, 50000, ascent_rate_1d(x, l.density, l.grid.workspace()));
  // cell masses move in quanta, so the ascent settles within about one cell
  // mass of stationarity rather than at 1e-3 / n
  EXPECT_LE(r.final_grad, 2.0 * l.gd.max_cell_mass());
  const double tol = std::max(1e-3, 20.0 * l.gd.max_cell_mass() * 400.0);
  EXPECT_LT(r.gap, tol);
  // weak duality along the whole ascent, up to quadrature error
  for (double f : r.ascent_values) EXPECT_LE(f, r.oracle_W + l.gd.max_cell_mass());
}

TEST(DualityGap, RefinementDoesNotWorsen) {
  const Density d = normal3();
  const std::vector<double> x = {-4.0, -1.2, 0.3, 0.9, 5.5};
  double previous = INFINITY;
  // coarse grids, where quadrature error dominates the quantization floor
  for (std::size_t cells : {50u, 100u, 200u, 400u, 800u}) {
    Grid g({{-10.0}, {10.0}}, {cells});
    const GridDensity gd = discretize(d, g);
    const DualityGap r = duality_gap_1d(x, d, gd, 100000, ascent_rate_1d(x, d, g.workspace()));
    if (std::isfinite(previous)) EXPECT_LE(r.gap, 1.1 * previous + 1e-9);
    previous = r.gap;
  }
}

TEST(DualityGap, DivergenceGuard) {
  std::vector<double> v = {5.0};
  for (int k = 0; k < 9; ++k) v.push_back(v.back() - 1.0);
  EXPECT_FALSE(ascent_diverging(v));
  v.push_back(v.back() - 1.0);
  EXPECT_TRUE(ascent_diverging(v));
  v.push_back(v.back());
  EXPECT_FALSE(ascent_diverging(v));
}

TEST(DualityGap, OversizedRateStaysBounded) {
  // F is concave in phi with bounded gradient, so a huge step oscillates
  // instead of falling forever
  Line l;
  const std::vector<double> x = {-1.0, -0.9, 0.5, 2.0};
  const DualityGap r = duality_gap_1d(x, l.density, l.gd, 1000, 1e4);
  EXPECT_FALSE(r.converged);
  for (double f : r.ascent_values) EXPECT_LE(f, r.oracle_W + l.gd.max_cell_mass());
}

TEST(HessianPhi, SingleRobotIsZero) {
  Line l;
  const SwarmState s(1, {0.5});
  for (auto mode : {HessianMode::kClosedForm1d, HessianMode::kFiniteDifference}) {
    const Eigen::MatrixXd h = hessian_phi(s, l.gd, l.density, mode);
    ASSERT_EQ(h.rows(), 1);
    EXPECT_EQ(h(0, 0), 0.0);
  }
}

TEST(HessianPhi, LaplacianStructure) {
  Line l;
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-8.0, 8.0), w(-0.3, 0.3);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> x(6), phi(6);
    for (double& v : x) v = u(rng);
    for (double& v : phi) v = w(rng);
    const SwarmState s(1, x, phi);
    for (auto mode : {HessianMode::kClosedForm1d, HessianMode::kFiniteDifference}) {
      const Eigen::MatrixXd h = hessian_phi(s, l.gd, l.density, mode);
      EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_LT(h.rowwise().sum().cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LE(pd_check(h).max_eigenvalue, 1e-8);
    }
  }
}

TEST(HessianPhi, ClosedFormMatchesFiniteDifference) {
  Line l;
  const SwarmState s(1, {-2.0, 0.4, 3.1}, {0.1, -0.05, 0.0});
  const Eigen::MatrixXd c = hessian_phi(s, l.gd, l.density, HessianMode::kClosedForm1d);
  const Eigen::MatrixXd f = hessian_phi(s, l.gd, l.density, HessianMode::kFiniteDifference);
  const double tol = std::max(1e-3, 5.0 * l.gd.max_cell_mass() / l.grid.spacing(0));
  EXPECT_LT((c - f).cwiseAbs().maxCoeff(), tol);
  // neighbors couple positively, non-neighbors not at all
  EXPECT_GT(c(0, 1), 0.0);
  EXPECT_GT(c(1, 2), 0.0);
  EXPECT_EQ(c(0, 2), 0.0);
}

TEST(HessianX, SingleRobotIsIdentity) {
  Line l;
  const SwarmState s(1, {0.5});
  EXPECT_NEAR(hessian_x(s, l.gd, l.density, HessianMode::kFiniteDifference)(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(hessian_x(s, l.gd, l.density, HessianMode::kClosedForm1d)(0, 0), 1.0, 1e-9);

  Grid g({{-10.0, -10.0}, {10.0, 10.0}}, {100, 100});
  const Density d2 = Density::gaussian({0.0, 0.0}, {4.0, 4.0});
  const GridDensity gd2 = discretize(d2, g);
  const Eigen::MatrixXd h = hessian_x(SwarmState(2, {1.0, -2.0}), gd2, d2, HessianMode::kFiniteDifference);
  EXPECT_LT((h - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(HessianX, ClosedFormMatchesFiniteDifferenceUniform) {
  Grid g({{-10.0}, {10.0}}, {2000});
  const Density u = Density::uniform({-10.0}, {10.0});
  const GridDensity gd = discretize(u, g);
  const SwarmState s(1, {-3.0, 4.0}, {0.6, 0.0});
  const Eigen::MatrixXd c = hessian_x(s, gd, u, HessianMode::kClosedForm1d);
  const Eigen::MatrixXd f = hessian_x(s, gd, u, HessianMode::kFiniteDifference);
  const double tol = std::max(1e-3, 5.0 * gd.max_cell_mass() / g.spacing(0));
  EXPECT_LT((c - f).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((f - f.transpose()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(HessianX, ClosedFormOffDiagonal) {
  // Moving x_j shifts the shared boundary, adding (x_i - m) rho(m) dm/dx_j to
  // robot i's gradient; negative since x_i < m.
  Grid g({{-10.0}, {10.0}}, {2000});
  const Density u = Density::uniform({-10.0}, {10.0});
  const GridDensity gd = discretize(u, g);
  const double xi = -3.0, xj = 4.0, pi = 0.6, pj = 0.0;
  const Eigen::MatrixXd c = hessian_x(SwarmState(1, {xi, xj}, {pi, pj}), gd, u, HessianMode::kClosedForm1d);
  const double m = 0.5 * (xi + xj) - (pi - pj) / (xi - xj);
  const double dm_dxj = 0.5 - (pi - pj) / ((xi - xj) * (xi - xj));
  EXPECT_NEAR(c(0, 1), (xi - m) * dm_dxj / 20.0, 1e-12);
  EXPECT_LT(c(0, 1), 0.0);
}

TEST(HessianX, TwoDimensionsSymmetric) {
  Grid g({{-10.0, -10.0}, {10.0, 10.0}}, {100, 100});
  const Density d2 = Density::mixture(
      {0.5, 0.5}, {Gaussian{{-5.0, -5.0}, {4.0, 4.0}}, Gaussian{{5.0, 5.0}, {4.0, 4.0}}});
  const GridDensity gd2 = discretize(d2, g);
  const SwarmState s(2, {-5.0, -5.0, 4.0, 5.0, -4.0, 3.0});
  const Eigen::MatrixXd h = hessian_x(s, gd2, d2, HessianMode::kFiniteDifference);
  EXPECT_EQ(h.rows(), 6);
  EXPECT_LT((h - h.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(hessian_x(s, gd2, d2, HessianMode::kClosedForm1d), Error);
}

TEST(PdCheck, Examples) {
  const DefinitenessCheck id = pd_check(Eigen::MatrixXd::Identity(4, 4));
  EXPECT_NEAR(id.min_eigenvalue, 1.0, 1e-14);
  EXPECT_TRUE(id.positive_definite);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  const DefinitenessCheck r = pd_check(d);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-14);
  EXPECT_FALSE(r.positive_definite);

  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2);
  bad(0, 1) = NAN;
  EXPECT_THROW(pd_check(bad), Error);
}

TEST(JacobiEigen, MatchesEigenSolver) {
  std::mt19937_64 rng(31);
  for (int n : {1, 2, 5, 17, 40}) {
    const Eigen::MatrixXd a = random_symmetric(rng, n);
    const SymmetricEigen j = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    const double scale = a.norm();
    EXPECT_LT((j.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-11 * scale);
    for (int k = 0; k < n; ++k) {
      const Eigen::VectorXd v = j.vectors.col(k);
      EXPECT_LT((a * v - j.values(k) * v).norm(), 1e-8 * scale);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    }
    for (int k = 1; k < n; ++k) EXPECT_LE(j.values(k - 1), j.values(k));
  }
}

TEST(JacobiEigen, RejectsNonSquare) {
  EXPECT_THROW(jacobi_eigen(Eigen::MatrixXd::Zero(2, 3)), Error);
}

TEST(HIndex, SingleRobot) {
  const HIndex h = h_index(SwarmState(1, {0.3}), normal3(), Workspace{{-10.0}, {10.0}});
  EXPECT_EQ(h.derived_max, 0.0);
  EXPECT_EQ(h.paper_literal_max, 0.0);
}

TEST(HIndex, ShiftInvariantAndNonNegative) {
  const Workspace ws{{-10.0}, {10.0}};
  const SwarmState s(1, {1.0, -2.0, 0.2, 3.5}, {0.1, -0.2, 0.05, 0.0});
  SwarmState shifted = s;
  for (double& w : shifted.weights) w += 7.0;
  const HIndex a = h_index(s, normal3(), ws);
  const HIndex b = h_index(shifted, normal3(), ws);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(a.derived[i], b.derived[i], 1e-12);
    EXPECT_GE(a.derived[i], 0.0);
    EXPECT_GE(a.paper_literal[i], 0.0);
  }
}

TEST(HIndex, DerivedMatchesGershgorinRow) {
  // Boundary terms of closed-form row i, scaled by n (the row with a_i = 1/n).
  Line l;
  const SwarmState s(1, {-3.0, -1.0, 0.5, 2.5}, {0.0, 0.02, -0.01, 0.0});
  const HIndex h = h_index(s, l.density, l.grid.workspace());
  const TruncatedDensity1d rho(l.density, -10.0, 10.0);
  for (std::size_t i = 1; i < 3; ++i) {
    double ref = 0.0;
    for (std::size_t j : {i - 1, i + 1}) {
      const double xi = s.positions[i], xj = s.positions[j];
      const double dphi = s.weights[i] - s.weights[j];
      const double m = 0.5 * (xi + xj) - dphi / (xi - xj);
      const double slope = dphi / ((xi - xj) * (xi - xj));
      ref += 4.0 * std::abs(xi - m) * (std::abs(0.5 + slope) + std::abs(0.5 - slope)) * rho.pdf(m);
    }
    EXPECT_NEAR(h.derived[i], ref, 1e-12);
  }
}

TEST(HIndex, RejectsTwoDimensions) {
  try {
    h_index(SwarmState(2, {0.0, 0.0, 1.0, 1.0}), Density::gaussian({0.0, 0.0}, {1.0, 1.0}),
            Workspace{{-1.0, -1.0}, {2.0, 2.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnsupportedDimension);
  }
}

TEST(Stability, DerivedBelowOneImpliesPositiveDefinite) {
  // Two robots at the balanced configuration of a uniform density.
  Grid g({{-1.0}, {1.0}}, {4000});
  const Density u = Density::uniform({-1.0}, {1.0});
  const GridDensity gd = discretize(u, g);
  const StabilityReport r = stability_report(SwarmState(1, {-0.5, 0.5}), gd, u);
  EXPECT_LT(r.h.derived_max, 1.0);
  EXPECT_TRUE(r.hessian_x_positive_definite);
  EXPECT_TRUE(r.lyapunov_stable_flag);
  EXPECT_LT(r.max_centroid_residual, 1e-9);
  EXPECT_LT(r.max_mass_residual, 1e-12);
  EXPECT_LE(r.max_eig_hessian_phi, 1e-8);
}

TEST(Monotonicity, Tolerance) {
  Line l;
  EXPECT_DOUBLE_EQ(monotonicity_tolerance(l.gd), l.gd.max_cell_mass() * 400.0);
}

TEST(Monotonicity, EquilibriumStartHasNoViolations) {
  Grid g({{-1.0}, {1.0}}, {2000});
  const GridDensity gd = discretize(Density::uniform({-1.0}, {1.0}), g);
  SimConfig c;
  c.dt = 0.1;
  c.max_time = 5.0;
  c.record_every = 1;
  c.steady_u_tol = 1e-20;
  c.steady_phi_tol = 1e-20;
  c.probe_monotonicity = true;
  c.initial_positions = {-0.5, 0.5};
  const TrajectoryRecord r = run(c, ControllerParams{Law::kOtcc, 0.5, 0.1}, gd);
  const MonotonicityReport rep = monotonicity_audit(r, monotonicity_tolerance(gd), true);
  EXPECT_EQ(rep.total_violations(), 0u);
  EXPECT_EQ(rep.checked_steps, r.steps);
}

TEST(Monotonicity, DetectsInjectedViolation) {
  TrajectoryRecord r;
  r.probes.push_back({1.0, 1.5, 1.0});
  r.probes.push_back({1.0, 0.9, 0.2});
  const MonotonicityReport rep = monotonicity_audit(r, 0.1, false);
  EXPECT_EQ(rep.x_descent_violations, 1u);
  EXPECT_EQ(rep.phi_ascent_violations, 1u);
  EXPECT_NEAR(rep.worst_x_violation, 0.5, 1e-15);
  EXPECT_NEAR(rep.worst_phi_violation, 0.8, 1e-15);
}
