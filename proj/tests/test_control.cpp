#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fd_support.hpp"
#include "otcc/control.hpp"
#include "otcc/error.hpp"

using namespace otcc;
using otcc::testing::F_at;

namespace {

struct Setup1d {
  Grid grid{{{-10.0}, {10.0}}, {2000}};
  GridDensity gd = discretize(Density::gaussian({0.0}, {3.0}), grid);
};

}  // namespace

TEST(ControllerParams, Validation) {
  EXPECT_NO_THROW((ControllerParams{Law::kOtcc, 0.5, 0.0}.validate()));
  EXPECT_THROW((ControllerParams{Law::kOtcc, 0.0, 0.0}.validate()), Error);
  EXPECT_THROW((ControllerParams{Law::kOtcc, 0.5, -1e-3}.validate()), Error);
  EXPECT_EQ(parse_law("vtcc"), Law::kVtcc);
  EXPECT_EQ(parse_law("otcc"), Law::kOtcc);
  EXPECT_EQ(to_string(Law::kVtcc), "vtcc");
  EXPECT_THROW(parse_law("lloyd"), Error);
}

TEST(DualValue, SingleRobotIsHalfSecondMoment) {
  Setup1d s;
  const SwarmState st(1, {1.5});
  double moment = 0.0;
  for (std::size_t c = 0; c < s.grid.num_cells(); ++c) {
    const double d = s.grid.center(c)[0] - 1.5;
    moment += 0.5 * d * d * s.gd.cell_mass[c];
  }
  EXPECT_NEAR(F_at(s.gd, st), moment, 1e-12);
  // truncated N(0,3): second moment about 1.5 is 3 + 2.25 up to tail mass
  EXPECT_NEAR(F_at(s.gd, st), 0.5 * (3.0 + 2.25), 1e-4);
}

TEST(DualValue, UniformShiftInvariance) {
  Setup1d s;
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    SwarmState st = otcc::testing::random_state(rng, s.grid.workspace(), 8);
    const double f0 = F_at(s.gd, st);
    for (double& w : st.weights) w += 3.125;
    // masses are bit-identical, so only the sum of (1/n - a_i) c remains
    EXPECT_NEAR(F_at(s.gd, st), f0, 1e-12);
  }
}

TEST(GradPhi, Examples) {
  Setup1d s;
  const auto one = grad_phi(tessellate(s.gd, SwarmState(1, {2.0})), 1);
  EXPECT_NEAR(one[0], 0.0, 1e-12);
  const auto two = grad_phi(tessellate(s.gd, SwarmState(1, {-1.0, 1.0})), 2);
  EXPECT_NEAR(two[0], 0.0, 1e-12);
  EXPECT_NEAR(two[1], 0.0, 1e-12);
}

TEST(GradPhi, SumsToZero) {
  Setup1d s;
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const SwarmState st = otcc::testing::random_state(rng, s.grid.workspace(), 12);
    const auto g = grad_phi(tessellate(s.gd, st), 12);
    EXPECT_NEAR(std::accumulate(g.begin(), g.end(), 0.0), 0.0, 1e-10);
  }
}

TEST(GradX, Examples) {
  Setup1d s;
  const Tessellation t = tessellate(s.gd, SwarmState(1, {2.0}));
  const auto g = grad_x(SwarmState(1, {2.0}), t);
  EXPECT_NEAR(g[0], 2.0, 1e-12);

  const double b = t.stats.centroid[0];
  const SwarmState at(1, {b});
  EXPECT_NEAR(grad_x(at, tessellate(s.gd, at))[0], 0.0, 1e-12);
}

TEST(GradX, EmptyCellIsZero) {
  Grid g({{-10.0}, {10.0}}, {200});
  const GridDensity gd = discretize(Density::uniform({-10.0}, {10.0}), g);
  const SwarmState st(1, {-1.0, 1.0}, {0.0, -50.0});
  const Tessellation t = tessellate(gd, st);
  EXPECT_EQ(grad_x(st, t)[1], 0.0);
  const ControlOutput out = control_step(st, t, ControllerParams{Law::kOtcc, 0.5, 0.2});
  EXPECT_EQ(out.u[1], 0.0);
  EXPECT_NEAR(out.phi_dot[1], 0.2 * 0.5, 1e-15);
}

TEST(GradientFidelity, OneDimension) {
  Setup1d s;
  std::mt19937_64 rng(3);
  otcc::testing::GradientAudit audit;
  for (int t = 0; t < 10; ++t) {
    otcc::testing::audit_state(s.gd, otcc::testing::random_state(rng, s.grid.workspace(), 6), audit);
  }
  // the raw pass rate is reported by the acceptance binary; here every miss
  // must be accounted for by ownership flips inside the stencil
  RecordProperty("pass_fraction", std::to_string(audit.pass_fraction()));
  EXPECT_EQ(audit.unexplained, 0u);
  EXPECT_EQ(audit.phi_passed, audit.phi_checked);
}

TEST(GradientFidelity, TwoDimensions) {
  Grid g({{-10.0, -10.0}, {10.0, 10.0}}, {100, 100});
  const GridDensity gd = discretize(
      Density::mixture({0.5, 0.5}, {Gaussian{{-5.0, -5.0}, {4.0, 4.0}}, Gaussian{{5.0, 5.0}, {4.0, 4.0}}}),
      g);
  std::mt19937_64 rng(4);
  otcc::testing::GradientAudit audit;
  for (int t = 0; t < 5; ++t) {
    otcc::testing::audit_state(gd, otcc::testing::random_state(rng, g.workspace(), 6), audit);
  }
  RecordProperty("pass_fraction", std::to_string(audit.pass_fraction()));
  EXPECT_EQ(audit.unexplained, 0u);
  EXPECT_EQ(audit.phi_passed, audit.phi_checked);
}

TEST(ControlStep, UniformIntervalExample) {
  Grid g({{-10.0}, {10.0}}, {2000});
  const GridDensity gd = discretize(Density::uniform({-10.0}, {10.0}), g);
  const SwarmState st(1, {-1.0, 1.0}, {0.5, 0.0});
  const ControlOutput out = control_step(st, tessellate(gd, st), ControllerParams{Law::kOtcc, 0.5, 0.0});
  EXPECT_NEAR(out.u[0], -1.9375, 1e-9);
}

TEST(ControlStep, Consistency) {
  Setup1d s;
  std::mt19937_64 rng(5);
  const ControllerParams p{Law::kOtcc, 0.5, 1e-2};
  for (int t = 0; t < 10; ++t) {
    const SwarmState st = otcc::testing::random_state(rng, s.grid.workspace(), 7);
    const Tessellation tess = tessellate(s.gd, st);
    const ControlOutput out = control_step(st, tess, p);
    double phi_sum = 0.0;
    for (std::size_t i = 0; i < 7; ++i) {
      phi_sum += out.phi_dot[i];
      EXPECT_NEAR(out.phi_dot[i], p.k_prime * out.grad_phi[i], 1e-18);
      if (tess.stats.empty[i]) continue;
      EXPECT_NEAR(out.u[i], -p.k * out.grad_x[i] / tess.stats.mass[i], 1e-12);
      EXPECT_NEAR(out.u[i] * (-1.0 / p.k) + tess.stats.centroid[i], st.positions[i], 1e-12);
    }
    EXPECT_NEAR(phi_sum, 0.0, 1e-10);
    EXPECT_NEAR(out.F_value, dual_value(st, tess), 1e-15);
  }
}

TEST(ControlStep, VtccFreezesWeights) {
  Setup1d s;
  const SwarmState st(1, {-3.0, 0.5, 2.0}, {0.1, -0.2, 0.0});
  const ControlOutput v = control_step(st, tessellate(s.gd, st), ControllerParams{Law::kVtcc, 0.5, 1.0});
  for (double d : v.phi_dot) EXPECT_EQ(d, 0.0);
}

TEST(ControlStep, OtccWithoutAscentMatchesVtcc) {
  Setup1d s;
  std::mt19937_64 rng(6);
  for (int t = 0; t < 10; ++t) {
    SwarmState st = otcc::testing::random_state(rng, s.grid.workspace(), 9);
    std::fill(st.weights.begin(), st.weights.end(), 0.0);
    const Tessellation tess = tessellate(s.gd, st);
    const ControlOutput o = control_step(st, tess, ControllerParams{Law::kOtcc, 0.5, 0.0});
    const ControlOutput v = control_step(st, tess, ControllerParams{Law::kVtcc, 0.5, 0.0});
    EXPECT_EQ(o.u, v.u);
  }
}

TEST(ControlStep, EquilibriumIsStationary) {
  // Two robots at the centroids of their halves of a symmetric uniform density.
  Grid g({{-1.0}, {1.0}}, {2000});
  const GridDensity gd = discretize(Density::uniform({-1.0}, {1.0}), g);
  const SwarmState st(1, {-0.5, 0.5});
  const ControlOutput out = control_step(st, tessellate(gd, st), ControllerParams{Law::kOtcc, 0.5, 0.1});
  for (double u : out.u) EXPECT_NEAR(u, 0.0, 1e-12);
  for (double d : out.phi_dot) EXPECT_NEAR(d, 0.0, 1e-12);
}
