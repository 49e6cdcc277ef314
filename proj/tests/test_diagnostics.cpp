#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "thinfilm/diagnostics.hpp"
#include "thinfilm/error.hpp"
#include "thinfilm/potentials.hpp"
#include "thinfilm/solver.hpp"

using namespace thinfilm;

namespace {

constexpr double kPi = std::numbers::pi;

ModelParams params(int nu, double n, double m, double A = 0.0, double M = 2.0) {
  ModelParams p;
  p.nu = nu;
  p.n = n;
  p.m = m;
  p.A = A;
  p.M = M;
  return p;
}

template <class F>
Field sample(const Grid& g, F f) {
  Field u;
  u.values.resize(g.cells());
  for (int i = 0; i < g.cells(); ++i) u[i] = f(g.center(i));
  return u;
}

Trajectory constant_trajectory(const Grid& g, const ModelParams& p, double c, int snaps = 3) {
  Trajectory tr;
  tr.params = p;
  tr.grid = g;
  for (int k = 0; k < snaps; ++k) tr.snapshots.push_back({std::vector<double>(g.cells(), c), 0.1 * k});
  return tr;
}

Trajectory reversed(Trajectory tr) {
  for (Field& f : tr.snapshots) std::reverse(f.values.begin(), f.values.end());
  return tr;
}

CutOff reversed(const Grid& g, CutOff z) {
  (void)g;
  std::reverse(z.zeta.begin(), z.zeta.end());
  std::reverse(z.dzeta.begin(), z.dzeta.end());
  for (double& d : z.dzeta) d = -d;
  std::reverse(z.d2zeta.begin(), z.d2zeta.end());
  return z;
}

} // namespace

TEST(Mass, Examples) {
  const Grid g(1.0, 100);
  EXPECT_NEAR(mass(sample(g, [](double) { return 1.0; }), g), 2.0, 1e-14);
  EXPECT_EQ(mass(sample(g, [](double) { return 0.0; }), g), 0.0);
  const Grid fine(1.0, 1000);
  const Field hat = sample(fine, [](double x) { return std::max(0.0, 1.0 - 2.0 * std::abs(x)); });
  EXPECT_NEAR(mass(hat, fine), 0.5, 4 * fine.dx() * fine.dx());
}

TEST(Energy, ConstantField) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  EXPECT_NEAR(energy(sample(g, [](double) { return 1.0; }), g, p), -1.0, 1e-14);
  const ModelParams q = params(-1, 2.0, 1.5, 0.3, 2.5);
  const double c = 0.7;
  EXPECT_NEAR(energy(sample(g, [&](double) { return c; }), g, q), -2.0 * potential_H(c, q), 1e-14);
}

TEST(Energy, SineMatchesClosedFormAtSecondOrder) {
  const ModelParams p = params(1, 1, 1);
  const double d = 0.1;
  const double exact = 0.5 * d * d * kPi * kPi - 1.0 - 0.5 * d * d;
  auto err = [&](int N) {
    const Grid g(1.0, N, Boundary::Periodic);
    return std::abs(energy(sample(g, [&](double x) { return 1.0 + d * std::cos(kPi * (x + 1.0)); }), g, p) -
                    exact);
  };
  const double e1 = err(64), e2 = err(128);
  EXPECT_LT(e1, 1e-3);
  EXPECT_GT(e1 / e2, 3.5);
}

TEST(Entropy, Examples) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  const Field one = sample(g, [](double) { return 1.0; });
  EXPECT_NEAR(entropy_global(one, g, 1.0, p), 1.0, 1e-14);
  const Field u = sample(g, [](double x) { return 1.2 + 0.5 * std::sin(3 * x); });
  Field cu = u;
  for (double& v : cu.values) v *= 1.7;
  for (double alpha : {0.5, 1.3, -0.5}) {
    EXPECT_NEAR(entropy_global(cu, g, alpha, p), std::pow(1.7, alpha + 1) * entropy_global(u, g, alpha, p),
                1e-12 * std::abs(entropy_global(cu, g, alpha, p)));
  }
}

TEST(Entropy, SingularWeightDominatedBySmallest) {
  // Sensitivity to a cell scales like u_i^alpha, largest at the smallest cell.
  const Grid g(1.0, 16);
  const ModelParams p = params(1, 1, 1);
  Field u = sample(g, [](double) { return 1.0; });
  u[5] = 1e-6;
  const double alpha = -0.999;
  auto sensitivity = [&](int i) {
    Field up = u, dn = u;
    up[i] *= 1.0 + 1e-4;
    dn[i] *= 1.0 - 1e-4;
    return std::abs(entropy_global(up, g, alpha, p) - entropy_global(dn, g, alpha, p)) / (2e-4 * u[i]);
  };
  const double small = sensitivity(5);
  for (int i : {0, 4, 6, 15}) EXPECT_GT(small, 1e5 * sensitivity(i));
}

TEST(Calibrate, Examples) {
  EXPECT_DOUBLE_EQ(calibrate(0, 1, 0, 1), 1.0);
  EXPECT_DOUBLE_EQ(calibrate(2, 0, 1, 1), 1.0);
  EXPECT_DOUBLE_EQ(calibrate(0, 0, 0, 0), 0.0);
  EXPECT_EQ(calibrate(1, 0, 0, 0), std::numeric_limits<double>::infinity());
  // K^2 - K - 1 = 0.
  EXPECT_NEAR(calibrate(1, 1, 0, 1), 0.5 * (1 + std::sqrt(5.0)), 1e-14);
  for (double fl : {0.0, 0.3, 2.0}) {
    const double K = calibrate(fl, 0.7, 0.1, 0.4);
    EXPECT_NEAR(fl + 0.7 / K, 0.1 + K * 0.4, 1e-12);
  }
}

TEST(CutOffs, Shapes) {
  const Grid g(1.0, 64);
  const CutOff q = CutOff::quartic(g, 0.5, 0.2);
  for (int i = 0; i < 64; ++i) {
    EXPECT_GE(q.zeta[i], 0.0);
    const double x = g.center(i);
    EXPECT_NEAR(q.zeta[i], std::pow(std::max(0.0, 0.5 - std::abs(x - 0.2)), 4), 1e-15);
  }
  const CutOff s = CutOff::smooth_step(g, 0.1, 0.3);
  for (int i = 0; i < 64; ++i) {
    EXPECT_GE(s.zeta[i], 0.0);
    EXPECT_LE(s.zeta[i], 1.0);
  }
  EXPECT_EQ(smooth_ramp(-1.0), 0.0);
  EXPECT_EQ(smooth_ramp(2.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_ramp(0.5), 0.5);
  EXPECT_EQ(smooth_ramp_d1(0.0), 0.0);
  EXPECT_EQ(smooth_ramp_d2(1.0), 0.0);
  EXPECT_FALSE(CutOff::one(g).vanishes());
}

TEST(LocalEntropy, ConstantTrajectoryHolds) {
  const Grid g(1.0, 64);
  const ModelParams p = params(-1, 1, 1);
  const double c = 0.8, alpha = 0.5;
  const EstimateReport r = audit_local_entropy(constant_trajectory(g, p, c), alpha, 0.8, CutOff::one(g), p);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.terms.at("entropy_T"), 2.0 * std::pow(c, 1 + alpha) / (alpha * (alpha + 1)), 1e-12);
  EXPECT_EQ(r.terms.at("hessian_term"), 0.0);
  EXPECT_EQ(r.terms.at("quartic_gradient_term"), 0.0);
}

TEST(LocalEntropy, DisjointCutOffHoldsWithZeros) {
  const Grid g(1.0, 64);
  const ModelParams p = params(1, 1, 1);
  Trajectory tr = constant_trajectory(g, p, 0.0);
  for (Field& f : tr.snapshots)
    for (int i = 0; i < 64; ++i) f[i] = std::max(0.0, 0.25 - std::pow(g.center(i) + 0.5, 2));
  const EstimateReport r = audit_local_entropy(tr, 0.5, 0.8, CutOff::quartic(g, 0.2, 0.7), p);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
}

TEST(LocalEntropy, RejectsInadmissibleExponents) {
  const Grid g(1.0, 32);
  const ModelParams p = params(-1, 1, 1);
  const Trajectory tr = constant_trajectory(g, p, 1.0);
  EXPECT_THROW(audit_local_entropy(tr, 1.5, 0.8, CutOff::one(g), p), DomainError);
  EXPECT_THROW(audit_local_entropy(tr, 0.5, 0.4, CutOff::one(g), p), DomainError);
}

TEST(LocalEntropy, DecayingRunAndReversalInvariance) {
  const Grid g(1.0, 96);
  const ModelParams p = params(-1, 1, 1);
  const Field u0 = sample(g, [](double x) { return 1.0 + 0.4 * std::cos(kPi * (x + 1.0)) + 0.1 * std::sin(2 * x); });
  const Trajectory tr = run(u0, g, p, SolverControls{}, 0.02, 0.002);
  const CutOff z = CutOff::quartic(g, 0.8, 0.1);
  const EstimateReport r = audit_local_entropy(tr, 0.5, 0.8, z, p);
  EXPECT_TRUE(r.holds);
  EXPECT_TRUE(std::isfinite(r.terms.at("calibrated_constant")));
  const EstimateReport rr = audit_local_entropy(reversed(tr), 0.5, 0.8, reversed(g, z), p);
  EXPECT_NEAR(rr.lhs, r.lhs, 1e-10 * std::abs(r.lhs));
  EXPECT_NEAR(rr.rhs, r.rhs, 1e-10 * std::abs(r.rhs));
}

TEST(LocalEnergy, TrivialCasesAndPrecondition) {
  const Grid g(1.0, 64);
  const ModelParams p = params(-1, 2.0, 1.0);
  const EstimateReport r = audit_local_energy(constant_trajectory(g, p, 0.9), CutOff::one(g), p);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.terms.at("dissipation"), 0.0);
  Trajectory tr = constant_trajectory(g, p, 0.0);
  for (Field& f : tr.snapshots)
    for (int i = 0; i < 64; ++i) f[i] = std::max(0.0, 0.25 - std::pow(g.center(i) + 0.5, 2));
  const EstimateReport d = audit_local_energy(tr, CutOff::quartic(g, 0.2, 0.7), p);
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.lhs, 0.0);
  EXPECT_EQ(d.rhs, 0.0);
  const ModelParams q = params(1, 1, 1);
  EXPECT_THROW(audit_local_energy(constant_trajectory(g, q, 1.0), CutOff::one(g), q), PreconditionError);
}

TEST(LocalEnergy, DecayingRunHolds) {
  const Grid g(1.0, 96);
  const ModelParams p = params(-1, 2.0, 1.0);
  const Field u0 = sample(g, [](double x) { return 1.0 + 0.3 * std::cos(kPi * (x + 1.0)); });
  const Trajectory tr = run(u0, g, p, SolverControls{}, 0.02, 0.002);
  EXPECT_TRUE(audit_local_energy(tr, CutOff::one(g), p).holds);
}

TEST(Bernis, TrivialCases) {
  const Grid g(1.0, 64, Boundary::Periodic);
  const EstimateReport c = bernis_check(sample(g, [](double) { return 0.6; }), g, CutOff::one(g), 2.0);
  EXPECT_TRUE(c.holds);
  EXPECT_EQ(c.lhs, 0.0);
  const EstimateReport z = bernis_check(sample(g, [](double) { return 0.0; }), g, CutOff::one(g), 2.0);
  EXPECT_TRUE(z.holds);
  EXPECT_EQ(z.lhs, 0.0);
  EXPECT_EQ(z.rhs, 0.0);
  EXPECT_THROW(bernis_check(sample(g, [](double) { return 1.0; }), g, CutOff::one(g), 3.0), DomainError);
  const Grid neumann(1.0, 64);
  EXPECT_THROW(bernis_check(sample(neumann, [](double) { return 1.0; }), neumann, CutOff::one(neumann), 2.0),
               PreconditionError);
}

TEST(Bernis, EmpiricalConstantStableUnderRefinement) {
  auto C = [](int N) {
    const Grid g(1.0, N, Boundary::Periodic);
    const Field u = sample(g, [](double x) { return 1.0 + 0.5 * std::sin(kPi * x); });
    return bernis_check(u, g, CutOff::one(g), 2.0).terms.at("empirical_constant");
  };
  const double c1 = C(128), c2 = C(256);
  EXPECT_GT(c1, 0.0);
  EXPECT_TRUE(std::isfinite(c1));
  EXPECT_LT(std::abs(c2 - c1) / c1, 0.2);
}

TEST(SupportEdge, Examples) {
  const Grid g(1.0, 200);
  EXPECT_FALSE(support_edge(sample(g, [](double) { return 0.0; }), g, 1e-12).has_value());
  const Grid wide(2.0, 400);
  const auto par = support_edge(sample(wide, [](double x) { return std::max(0.0, 1.0 - x * x); }), wide, 1e-14);
  ASSERT_TRUE(par.has_value());
  EXPECT_NEAR(par->right, 1.0, wide.dx());
  EXPECT_NEAR(par->left, -1.0, wide.dx());
  const auto hat = support_edge(sample(g, [](double x) { return std::max(0.0, 1.0 - 2.0 * std::abs(x)); }), g, 1e-12);
  ASSERT_TRUE(hat.has_value());
  EXPECT_NEAR(hat->right, 0.5, g.dx());
}

TEST(ContactFit, ExactPowers) {
  const Grid g(2.0, 800);
  const double e = 0.5;
  const Field sq = sample(g, [&](double x) { return std::pow(std::max(0.0, e - x), 2.0); });
  EXPECT_NEAR(fit_contact_exponent(sq, g, e, 10), 2.0, 0.05);
  const Field th = sample(g, [&](double x) { return std::pow(std::max(0.0, e - x), 1.5); });
  EXPECT_NEAR(fit_contact_exponent(th, g, e, 10), 1.5, 0.05);
  const Field pb = sample(g, [](double x) { return std::max(0.0, (x + 1.0) * (0.5 - x)); });
  EXPECT_NEAR(fit_contact_exponent(pb, g, 0.5, 8, Side::Right), 1.0, 0.05);
  EXPECT_NEAR(fit_contact_exponent(pb, g, -1.0, 8, Side::Left), 1.0, 0.05);
}

TEST(ContactFit, TooFewCells) {
  const Grid g(1.0, 32);
  const Field sq = sample(g, [](double x) { return std::pow(std::max(0.0, -0.9 - x), 2.0); });
  EXPECT_THROW(fit_contact_exponent(sq, g, -0.9, 8), FitError);
}

TEST(SupportEdge, MainComponentIgnoresDetachedRipples) {
  const Grid g(1.0, 100);
  Field u = sample(g, [](double x) { return std::max(0.0, 0.25 - x * x); });
  u[90] = 1e-3;
  const auto outer = support_edge(u, g, 1e-4);
  const auto main = support_edge(u, g, 1e-4, EdgeScope::MainComponent);
  ASSERT_TRUE(outer && main);
  EXPECT_GT(outer->right, g.center(90));
  EXPECT_NEAR(main->right, 0.5, g.dx());
  EXPECT_NEAR(main->left, outer->left, 1e-15);
}
