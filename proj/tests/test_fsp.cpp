#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "thinfilm/error.hpp"
#include "thinfilm/fsp.hpp"

using namespace thinfilm;

namespace {

ModelParams params(int nu, double n, double m) {
  ModelParams p;
  p.nu = nu;
  p.n = n;
  p.m = m;
  return p;
}

Trajectory uniform_trajectory(const Grid& g, const ModelParams& p, double c, double T) {
  Trajectory tr;
  tr.params = p;
  tr.grid = g;
  tr.snapshots.push_back({std::vector<double>(g.cells(), c), 0.0});
  tr.snapshots.push_back({std::vector<double>(g.cells(), c), T});
  return tr;
}

Field left_bump(const Grid& g, double center = -0.5, double width = 0.4) {
  Field u;
  u.values.resize(g.cells());
  for (int i = 0; i < g.cells(); ++i) {
    const double r = (g.center(i) - center) / width;
    u[i] = std::pow(std::max(0.0, 1.0 - r * r), 2.0);
  }
  return u;
}

} // namespace

TEST(EnergyFunctions, UnitIntegrand) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  const std::vector<double> s{-1.0, -0.3, 0.0, 0.25, 0.5, 1.0};
  const EnergyFunctions ef = energy_functions(uniform_trajectory(g, p, 1.0, 1.0), 0.5, p, s);
  for (std::size_t j = 0; j < s.size(); ++j) {
    EXPECT_NEAR(ef.J[j], 1.0 - s[j], 1e-14);
    EXPECT_NEAR(ef.E[j], 1.0 - s[j], 1e-14);
    EXPECT_NEAR(ef.I[j], 1.0 - s[j], 1e-14);
  }
}

TEST(EnergyFunctions, VanishBeyondSupportAndMonotone) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  Trajectory tr = uniform_trajectory(g, p, 0.0, 0.5);
  for (Field& f : tr.snapshots) f = Field{left_bump(g).values, f.time};
  std::vector<double> s;
  for (double x = -1.0; x <= 1.0; x += 0.05) s.push_back(x);
  const EnergyFunctions ef = energy_functions(tr, 0.5, p, s);
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] > 0.0) {
      EXPECT_EQ(ef.J[j], 0.0);
      EXPECT_EQ(ef.E[j], 0.0);
      EXPECT_EQ(ef.I[j], 0.0);
      EXPECT_EQ(ef.h0[j], 0.0);
    }
    if (j > 0) {
      EXPECT_LE(ef.J[j], ef.J[j - 1]);
      EXPECT_LE(ef.E[j], ef.E[j - 1]);
      EXPECT_LE(ef.I[j], ef.I[j - 1]);
    }
  }
  EXPECT_THROW(energy_functions(tr, 1.0, p, s), DomainError);
}

TEST(Exponents, BetasAndMu) {
  const auto b = fsp_betas(params(1, 1, 1));
  EXPECT_DOUBLE_EQ(b[0], 1.0);
  EXPECT_DOUBLE_EQ(b[1], 1.0);
  EXPECT_DOUBLE_EQ(b[2], 1.0);
  EXPECT_DOUBLE_EQ(fsp_mu(1.0, 1.0, 0.5), 4.0 / 7.0);
  // m >= 6-n: mbar = (1/2 + 5)/2 = 2.75, beta_3 = 4.5.
  const auto s = fsp_betas(params(1, 1, 5.5));
  EXPECT_DOUBLE_EQ(s[1], 5.5);
  EXPECT_DOUBLE_EQ(s[2], 4.5);
}

TEST(Stampacchia, Examples) {
  const StampacchiaBound b = stampacchia_s0(1, 1, 2, 1);
  EXPECT_DOUBLE_EQ(b.closed_form, 4.0);
  EXPECT_DOUBLE_EQ(b.scaling_form, 4.0);
  EXPECT_NEAR(b.brute_force, 4.0, 1e-9);
  EXPECT_TRUE(stampacchia_majorant_vanishes(1, 1, 2, 1, b.delta0));
  const StampacchiaBound z = stampacchia_s0(1, 1, 2, 0);
  EXPECT_EQ(z.brute_force, 0.0);
  EXPECT_THROW(stampacchia_s0(1, 1, 1.0, 1), DomainError);
}

TEST(Stampacchia, BruteForceFollowsRecurrenceScaling) {
  const StampacchiaBound b = stampacchia_s0(3, 0.5, 1.5, 0.2);
  EXPECT_NEAR(b.closed_form, 8.823388552213913, 1e-12);
  EXPECT_NEAR(b.scaling_form, 11.837817956786257, 1e-12);
  EXPECT_NEAR(b.brute_force, b.scaling_form, 1e-9 * b.scaling_form);
}

TEST(Stampacchia, RandomTuplesVanishAtBound) {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    const double c0 = 0.1 + 4.0 * u01(gen);
    const double a = 0.2 + 2.0 * u01(gen);
    const double b = 1.1 + 2.0 * u01(gen);
    const double g0 = 3.0 * u01(gen);
    const StampacchiaBound s = stampacchia_s0(c0, a, b, g0);
    EXPECT_TRUE(stampacchia_majorant_vanishes(c0, a, b, g0, s.delta0)) << k;
    EXPECT_FALSE(stampacchia_majorant_vanishes(c0, a, b, g0, 0.99 * s.delta0)) << k;
  }
}

TEST(StampacchiaSystem, ZeroDataReturnsS1) {
  const StampacchiaSystemBound r = stampacchia_system({1, 2, 3}, {1, 0.5, 0.7}, {2, 1.5, 3}, {0, 0, 0}, 0.37);
  EXPECT_EQ(r.s0, 0.37);
  EXPECT_EQ(r.l, 3);
  EXPECT_EQ(r.Q, 0.0);
}

TEST(StampacchiaSystem, SingleComponentMatchesScalar) {
  const StampacchiaSystemBound r = stampacchia_system({1.7}, {0.8}, {1.6}, {0.4}, 0.0);
  const StampacchiaBound s = stampacchia_s0(1.7, 0.8, 1.6, 0.4);
  EXPECT_NEAR(r.s0, s.brute_force, 1e-9 * s.brute_force);
}

TEST(StampacchiaSystem, FullLeadingRunIsFinite) {
  const std::vector<double> c{1, 2, 0.5}, a{1, 0.5, 0.7}, b{2, 1.5, 3}, g0{0.3, 0.1, 0.2};
  const StampacchiaSystemBound r = stampacchia_system(c, a, b, g0, 0.1);
  EXPECT_EQ(r.Q, 0.0);
  EXPECT_TRUE(std::isfinite(r.s0));
  EXPECT_GT(r.s0, 0.1);
  EXPECT_TRUE(stampacchia_system_vanishes(c, a, b, g0, r.delta0));
}

TEST(StampacchiaSystem, QAtLeastOneIsNotApplicable) {
  EXPECT_THROW(stampacchia_system({1, 5}, {1, 0}, {2, 2}, {1, 1}, 0.0), NotApplicableError);
}

TEST(Verify, ZeroTrajectoryHoldsWithZeroConstant) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  const EnergyFunctions ef =
      energy_functions(uniform_trajectory(g, p, 0.0, 0.1), 0.5, p, {0.0, 0.2, 0.4, 0.6});
  const EstimateReport r = verify_fsp_system(ef, p, 0.1);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.terms.at("calibrated_constant"), 0.0);
  EXPECT_DOUBLE_EQ(r.terms.at("mu_1"), 4.0 / 7.0);
}

TEST(Verify, RejectsSupportBeyondOrigin) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  const EnergyFunctions ef = energy_functions(uniform_trajectory(g, p, 1.0, 0.1), 0.5, p, {0.1, 0.5});
  EXPECT_THROW(verify_fsp_system(ef, p, 0.1), PreconditionError);
}

TEST(Experiment, ZeroDataIsVacuous) {
  const Grid g(1.0, 64);
  const FspVerdict v = run_fsp_experiment(params(1, 1, 1), Field{std::vector<double>(64, 0.0), 0.0}, g,
                                          SolverControls{}, 0.01);
  EXPECT_TRUE(v.finite_speed);
  EXPECT_TRUE(v.edge_curve.empty());
}

TEST(Experiment, Preconditions) {
  const Grid g(1.0, 64);
  Field right = left_bump(g, 0.5);
  EXPECT_THROW(run_fsp_experiment(params(1, 1, 1), right, g, SolverControls{}, 0.01), PreconditionError);
  EXPECT_THROW(run_fsp_experiment(params(1, 1, 0.4), left_bump(g), g, SolverControls{}, 0.01),
               PreconditionError);
}

TEST(Experiment, EdgeAdvancesButStaysInside) {
  const Grid g(1.0, 128);
  for (int nu : {1, -1}) {
    const FspVerdict v = run_fsp_experiment(params(nu, 1, 1), left_bump(g), g, SolverControls{}, 0.005);
    ASSERT_GE(v.edge_curve.size(), 2u);
    EXPECT_GT(v.edge_curve.back().second, v.edge_curve.front().second) << nu;
    EXPECT_LT(v.edge_curve.back().second, g.half_width()) << nu;
    EXPECT_TRUE(v.finite_speed);
    EXPECT_FALSE(v.reached_boundary_at.has_value());
    EXPECT_TRUE(std::isfinite(v.max_edge_speed));
    EXPECT_GT(v.max_edge_speed, 0.0);
    EXPECT_DOUBLE_EQ(v.eps_used, 1e-12);
  }
}

TEST(Sweep, EmptyAndDuplicateAxes) {
  const Grid g(1.0, 32);
  const Field zero{std::vector<double>(32, 0.0), 0.0};
  EXPECT_TRUE(sweep(params(1, 1, 1), SweepAxis{"m", {}}, zero, g, SolverControls{}, 0.01).empty());
  const auto pts = sweep(params(1, 1, 1), SweepAxis{"m", {0.8, 0.8, 1.2}}, zero, g, SolverControls{}, 0.01);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].params.m, 0.8);
  EXPECT_EQ(pts[1].params.m, 0.8);
  EXPECT_EQ(pts[2].params.m, 1.2);
}

TEST(Sweep, PerPointErrorsRecordedInline) {
  const Grid g(1.0, 64);
  const auto pts = sweep(params(1, 1, 1), SweepAxis{"m", {0.3, 1.0}}, left_bump(g), g, SolverControls{}, 0.002);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_FALSE(pts[0].error.empty());
  EXPECT_TRUE(pts[1].error.empty());
}

TEST(Sweep, AxisNames) {
  const ModelParams b = params(1, 1, 1);
  EXPECT_EQ(with_axis_value(b, "n", 1.5).n, 1.5);
  EXPECT_EQ(with_axis_value(b, "nu", -1).nu, -1);
  EXPECT_THROW(with_axis_value(b, "nu", 0.5), InputError);
  EXPECT_THROW(with_axis_value(b, "q", 1.0), InputError);
}
