#include <gtest/gtest.h>

#include <cmath>

#include "thinfilm/error.hpp"
#include "thinfilm/params.hpp"

using namespace thinfilm;

namespace {

ModelParams make(int nu, double n, double m, double A = 0.0, double M = 2.0) {
  ModelParams p;
  p.nu = nu;
  p.n = n;
  p.m = m;
  p.A = A;
  p.M = M;
  return p;
}

} // namespace

TEST(Validate, RejectsBadFields) {
  ModelParams p;
  p.nu = 2;
  try {
    p.validate();
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("'nu'"), std::string::npos);
  }
  p = ModelParams{};
  p.theta = 0.5;
  EXPECT_THROW(p.validate(), InputError);
  p = ModelParams{};
  p.A = 1.0;
  p.M = p.m;
  EXPECT_THROW(p.validate(), InputError);
  p = ModelParams{};
  p.potential.kind = PotentialKind::RationalGravity;
  EXPECT_THROW(p.validate(), InputError);
  p.potential.B = 1.0;
  p.potential.G = 0.5;
  EXPECT_NO_THROW(p.validate());
}

TEST(Classify, UnstableCaseThreeWithFiniteSpeed) {
  const RegimeReport r = classify_regime(make(1, 1, 2));
  EXPECT_TRUE(r.weak_existence);
  EXPECT_EQ(r.weak_case, "iii");
  EXPECT_TRUE(r.fsp_strong_slip);
}

TEST(Classify, BlowUpBoundaryIsExcluded) {
  const RegimeReport r = classify_regime(make(1, 1, 3));
  EXPECT_FALSE(r.weak_existence);
  EXPECT_FALSE(r.strong_entropy);
  EXPECT_FALSE(r.fsp_strong_slip);
  bool cited = false;
  for (const auto& n : r.notes) cited = cited || n.find("n+2") != std::string::npos;
  EXPECT_TRUE(cited);
}

TEST(Classify, StableWithStabilizerHasLocalEnergy) {
  const RegimeReport r = classify_regime(make(-1, 2.5, 1.2, 1.0, 2.0));
  EXPECT_TRUE(r.weak_existence);
  EXPECT_EQ(r.weak_case, "i");
  EXPECT_TRUE(r.local_energy);
}

TEST(Classify, MonotoneBeyondBlowUp) {
  for (double m = 3.0; m < 6.0; m += 0.25) {
    EXPECT_FALSE(classify_regime(make(1, 1, m)).weak_existence) << m;
  }
}

TEST(Classify, StrictThresholdAtHalfN) {
  EXPECT_FALSE(classify_regime(make(1, 1, 0.5)).fsp_strong_slip);
  EXPECT_TRUE(classify_regime(make(1, 1, 0.5000001)).fsp_strong_slip);
}

TEST(Classify, VariantsViaBound) {
  ModelParams p;
  p.potential.kind = PotentialKind::ExponentialPolar;
  p.potential.b1 = p.potential.b2 = 1.0;
  const RegimeReport r = classify_regime(p);
  EXPECT_TRUE(r.via_bound);
  EXPECT_TRUE(r.weak_existence);
  EXPECT_EQ(r.weak_case, "iii");
}

TEST(AlphaStar, Branches) {
  EXPECT_DOUBLE_EQ(alpha_star(1.0), -0.5);
  EXPECT_DOUBLE_EQ(alpha_star(1.5), -1.0);
  EXPECT_DOUBLE_EQ(alpha_star(2.5), -1.0);
  EXPECT_THROW(alpha_star(3.0), DomainError);
  EXPECT_THROW(alpha_star(0.0), DomainError);
  for (double n = 0.01; n < 3.0; n += 0.01) {
    EXPECT_GE(alpha_star(n), 0.5 - n - 1e-15);
    EXPECT_LT(alpha_star(n), 2.0 - n);
  }
}

TEST(BetaZero, Branches) {
  EXPECT_DOUBLE_EQ(beta_zero_bound(1.0), 2.0);
  EXPECT_DOUBLE_EQ(beta_zero_bound(2.0), 1.5);
  EXPECT_DOUBLE_EQ(beta_zero_bound(1.5), 2.0);
  EXPECT_THROW(beta_zero_bound(-1.0), DomainError);
}

TEST(GammaWindow, Examples) {
  const Interval w = gamma_window(-0.5, 1.5);
  EXPECT_NEAR(w.lo, 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(w.hi, 1.0, 1e-15);
  const Interval lo = gamma_window(0.0, 0.5);
  EXPECT_DOUBLE_EQ(lo.lo, 0.5);
  EXPECT_DOUBLE_EQ(lo.hi, 0.5);
  EXPECT_FALSE(lo.empty);
  const Interval hi = gamma_window(1.0, 1.0);
  EXPECT_DOUBLE_EQ(hi.lo, 1.0);
  EXPECT_DOUBLE_EQ(hi.hi, 1.0);
  EXPECT_THROW(gamma_window(2.0, 1.0), DomainError);
  EXPECT_THROW(gamma_window(-1.0, 1.2), DomainError);
}

TEST(GammaWindow, ContainsThirdOfTPlusOne) {
  for (double t = 0.5; t <= 2.0; t += 0.01) {
    const Interval w = gamma_window(t - 1.0, 1.0);
    EXPECT_TRUE(w.contains_closed((t + 1.0) / 3.0)) << t;
  }
}

TEST(EtaWindow, Examples) {
  const Interval w = eta_window(2.0, 1.5);
  EXPECT_FALSE(w.empty);
  EXPECT_DOUBLE_EQ(w.lo, 0.0);
  EXPECT_DOUBLE_EQ(w.hi, 1.5);
  EXPECT_TRUE(eta_window(2.0, 1.0).empty);
  EXPECT_TRUE(eta_window(3.0, 1.5).empty);
  for (double m = -1.0; m < 3.0; m += 0.125) {
    EXPECT_EQ(!eta_window(1.3, m).empty, 2.0 * m - 1.3 > 0.0);
  }
}

TEST(AdmissibleAlpha, ExcludesSingularPoints) {
  ModelParams p = make(-1, 0.5, 1.0);
  const Interval w = admissible_alpha(p, true);
  EXPECT_DOUBLE_EQ(w.lo, 0.0);
  EXPECT_DOUBLE_EQ(w.hi, 1.5);
  EXPECT_FALSE(alpha_admissible(p, 0.0, true));
  EXPECT_TRUE(alpha_admissible(p, 0.5, true));
  p = make(1, 1.0, 0.2);
  // -2m+n-1 = -0.4 dominates for nu = 1.
  EXPECT_DOUBLE_EQ(admissible_alpha(p, true).lo, -0.4);
  EXPECT_DOUBLE_EQ(admissible_alpha(p, false).lo, -0.4);
  EXPECT_FALSE(alpha_admissible(make(1, 1.0, 1.0), -1.0, true));
}

TEST(GapInequality, HoldsAboveHalfN) {
  // alpha + 2m - n + 1 > alpha + 1 for every admissible alpha once m > n/2.
  for (double n = 0.1; n < 2.0; n += 0.1) {
    for (double m = n / 2 + 0.01; m < n + 2.0; m += 0.2) {
      const Interval w = admissible_alpha(make(1, n, m), true);
      if (w.empty) continue;
      for (int k = 1; k < 10; ++k) {
        const double alpha = w.lo + (w.hi - w.lo) * k / 10.0;
        EXPECT_GT(alpha + 2 * m - n + 1, alpha + 1);
      }
    }
  }
}

#include "classifier_cases.hpp"

TEST(Classify, HandCheckedTable) {
  for (const ClassifierCase& c : classifier_cases()) {
    const RegimeReport r = classify_regime(c.params);
    EXPECT_EQ(r.weak_existence, std::string(c.weak_case) != "") << c.label;
    EXPECT_EQ(r.weak_case, c.weak_case) << c.label;
    EXPECT_EQ(r.strong_entropy, c.strong_entropy) << c.label;
    EXPECT_EQ(r.local_energy, c.local_energy) << c.label;
    EXPECT_EQ(r.fsp_strong_slip, c.fsp_strong_slip) << c.label;
    EXPECT_EQ(r.fsp_weak_slip, c.fsp_weak_slip) << c.label;
  }
}

TEST(Classify, NotesNameViolations) {
  for (const ClassifierCase& c : classifier_cases()) {
    const RegimeReport r = classify_regime(c.params);
    if (!r.weak_existence) {
      EXPECT_FALSE(r.notes.empty()) << c.label;
    }
  }
}
