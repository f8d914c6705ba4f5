#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qtraj/params.hpp"

using namespace qtraj;

namespace {

// Physical set solved backwards from kbar = 0.25, xi = 1.2, D = 0.001 for a
// 780 nm transition in a rubidium-87 sized mass.
PhysicalParams paper_like_physical() {
  PhysicalParams pp;
  pp.kL = 2.0 * std::numbers::pi / 780e-9;
  pp.M = 1.443e-25;
  pp.omega = 4.0 * kHbar * pp.kL * pp.kL / (pp.M * 0.25);
  // chi = xi omega / kbar and D_phys = D omega; D_phys / chi = g^2 / (Delta kappa)
  const double chi = 1.2 * pp.omega / 0.25;
  const double ratio = 0.001 * pp.omega / chi;
  pp.g = 3e4 * pp.omega;
  pp.Delta = 100.0 * pp.g;
  pp.kappa = pp.g * pp.g / (pp.Delta * ratio);
  pp.E0 = std::sqrt(chi * pp.Delta * pp.kappa * pp.kappa / (2.0 * pp.g * pp.g));
  return pp;
}

struct Oracle {
  double kbar, xi, D;
};

Oracle direct_formulas(const PhysicalParams& pp) {
  const double d = 2.0 * std::pow(pp.g, 4) * std::pow(pp.E0, 2) / (std::pow(pp.Delta, 2) * std::pow(pp.kappa, 3));
  const double chi = 2.0 * pp.g * pp.g * pp.E0 * pp.E0 / (pp.Delta * pp.kappa * pp.kappa);
  return {4.0 * kHbar * pp.kL * pp.kL / (pp.M * pp.omega), 4.0 * pp.kL * pp.kL / (pp.M * pp.omega * pp.omega) * kHbar * chi,
          d / pp.omega};
}

}  // namespace

TEST(Modulation, ReferenceValues) {
  EXPECT_NEAR(modulation_factor(0.0, 0.2), 0.6, 1e-15);
  EXPECT_NEAR(modulation_factor(std::numbers::pi, 0.2), 1.4, 1e-15);
  for (double t : {0.0, 0.3, 1.7, 5.0, 123.4}) EXPECT_EQ(modulation_factor(t, 0.0), 1.0);
}

TEST(Modulation, PeriodTwoPi) {
  for (double t = -7.0; t < 7.0; t += 0.37) {
    EXPECT_NEAR(modulation_factor(t, 0.2), modulation_factor(t + kTwoPi, 0.2), 1e-15);
  }
}

TEST(Modulation, SharedByWellDepthAndDiffusion) {
  SimParams p;
  p.xi = 1.2;
  p.D = 0.01;
  p.epsilon = 0.2;
  for (double t : {0.0, 1.0, std::numbers::pi}) {
    EXPECT_DOUBLE_EQ(p.xi_at(t), 1.2 * modulation_factor(t, 0.2));
    EXPECT_DOUBLE_EQ(p.D_at(t), 0.01 * modulation_factor(t, 0.2));
  }
}

TEST(SimParamsValidate, Invariants) {
  SimParams ok;
  EXPECT_NO_THROW(ok.validate());
  auto expect_bad = [](auto mutate, const char* key) {
    SimParams p;
    mutate(p);
    try {
      p.validate();
      FAIL() << "accepted invalid " << key;
    } catch (const std::invalid_argument& e) {
      EXPECT_EQ(std::string(e.what()).rfind(key, 0), 0u) << e.what();
    }
  };
  expect_bad([](SimParams& p) { p.kbar = 0.0; }, "kbar");
  expect_bad([](SimParams& p) { p.xi = -1.0; }, "xi");
  expect_bad([](SimParams& p) { p.D = -1e-3; }, "D");
  expect_bad([](SimParams& p) { p.epsilon = 0.5; }, "epsilon");
  expect_bad([](SimParams& p) { p.steps_per_period = 0; }, "steps_per_period");
  expect_bad([](SimParams& p) { p.grid_size = 8; }, "grid_size");
  expect_bad([](SimParams& p) { p.grid_size = 96; }, "grid_size");
}

TEST(Physical, HitsDimensionlessTargets) {
  const PhysicalParams pp = paper_like_physical();
  const SimParams s = dimensionless_from_physical(pp);
  EXPECT_NEAR(s.kbar, 0.25, 1e-12);
  EXPECT_NEAR(s.xi, 1.2, 1e-12);
  EXPECT_NEAR(s.D, 0.001, 1e-14);
  ASSERT_TRUE(s.provenance.has_value());
  EXPECT_EQ(s.provenance->g, pp.g);
  const Oracle o = direct_formulas(pp);
  EXPECT_NEAR(s.kbar, o.kbar, 1e-13);
  EXPECT_NEAR(s.xi, o.xi, 1e-12);
  EXPECT_NEAR(s.D, o.D, 1e-15);
}

TEST(Physical, DoublingDriveQuadruplesDAndXi) {
  PhysicalParams pp = paper_like_physical();
  pp.E0 *= 0.5;  // stay inside the weak-drive bound after doubling
  const SimParams a = dimensionless_from_physical(pp);
  pp.E0 *= 2.0;
  const SimParams b = dimensionless_from_physical(pp);
  EXPECT_NEAR(b.D / a.D, 4.0, 1e-12);
  EXPECT_NEAR(b.xi / a.xi, 4.0, 1e-12);
  EXPECT_NEAR(b.kbar, a.kbar, 1e-15);
}

TEST(Physical, VanishingCouplingIsFreeParticle) {
  PhysicalParams pp = paper_like_physical();
  pp.g *= 1e-9;
  pp.Delta = 10.0 * pp.g * 1e9;  // keep Delta fixed
  const SimParams s = dimensionless_from_physical(pp);
  EXPECT_LT(s.D, 1e-30);
  EXPECT_LT(s.xi, 1e-15);
  EXPECT_NEAR(s.kbar, 0.25, 1e-12);
}

TEST(Physical, ScaleInvariance) {
  const PhysicalParams pp = paper_like_physical();
  const SimParams a = dimensionless_from_physical(pp);
  for (double c : {0.5, 3.0, 10.0}) {
    PhysicalParams q = pp;
    q.omega *= c;
    q.g *= c;
    q.E0 *= c;
    q.Delta *= c;
    q.kappa *= c;
    q.M /= c;
    const SimParams b = dimensionless_from_physical(q);
    EXPECT_NEAR(b.kbar, a.kbar, 1e-12 * a.kbar);
    EXPECT_NEAR(b.xi, a.xi, 1e-12 * a.xi);
    EXPECT_NEAR(b.D, a.D, 1e-12 * a.D);
  }
}

TEST(Physical, RejectsBadInputs) {
  PhysicalParams pp = paper_like_physical();
  pp.g = 0.0;
  EXPECT_THROW(dimensionless_from_physical(pp), std::invalid_argument);
  pp = paper_like_physical();
  pp.M = -1.0;
  EXPECT_THROW(dimensionless_from_physical(pp), std::invalid_argument);

  pp = paper_like_physical();
  pp.Delta = 5.0 * pp.g;
  try {
    dimensionless_from_physical(pp);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("large-detuning"), std::string::npos);
  }
  AssumptionLimits relaxed;
  relaxed.min_detuning_ratio = 2.0;
  EXPECT_NO_THROW(dimensionless_from_physical(pp, relaxed));

  pp = paper_like_physical();
  pp.E0 = 0.5 * pp.kappa;
  try {
    dimensionless_from_physical(pp);
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("weak-drive"), std::string::npos);
  }
}
