#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtraj/classical.hpp"

using namespace qtraj;
using std::numbers::pi;

namespace {

SimParams deterministic(double epsilon) {
  SimParams p;
  p.kbar = 0.25;
  p.xi = 1.2;
  p.D = 0.0;
  p.epsilon = epsilon;
  p.steps_per_period = 200;
  return p;
}

double energy(const ClassicalState& s, double xi) { return 0.5 * s.p * s.p - xi * std::cos(s.x); }

}  // namespace

TEST(Classical, HarmonicLimitFrequency) {
  const SimParams params = deterministic(0.0);
  ClassicalState s{0.01, 0.0, 0.0};
  const double dt = params.dt();
  std::vector<double> crossings;
  double prev = s.x;
  for (int i = 0; i < 200 * 20; ++i) {
    const double t0 = s.time;
    symplectic_step(s, dt, params);
    if (prev > 0.0 && s.x <= 0.0) crossings.push_back(t0 + dt * prev / (prev - s.x));
    prev = s.x;
  }
  ASSERT_GE(crossings.size(), 5u);
  const double period = (crossings.back() - crossings.front()) / double(crossings.size() - 1);
  EXPECT_NEAR(kTwoPi / period, std::sqrt(1.2), 0.01 * std::sqrt(1.2));
}

TEST(Classical, NoNoiseAtCouplingNode) {
  SimParams params = deterministic(0.2);
  params.D = 0.5;
  ClassicalState s{0.0, 0.7, 1.0};
  stochastic_kick(s, {3.0, 0.01}, params);
  EXPECT_EQ(s.p, 0.7);
  ClassicalState r{0.0, 0.7, 1.0};
  ClassicalState q = r;
  sde_step(r, {3.0, 0.01}, params);
  sde_step(q, {-2.0, 0.01}, params);
  EXPECT_EQ(r.p, q.p);
  EXPECT_EQ(r.x, q.x);
}

TEST(Classical, NoiseFreeStepIsSymplecticStep) {
  const SimParams params = deterministic(0.2);
  ClassicalState a{-2.5, 1.0, 0.3};
  ClassicalState b = a;
  for (int i = 0; i < 1000; ++i) {
    sde_step(a, {0.123, params.dt()}, params);
    symplectic_step(b, params.dt(), params);
  }
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.p, b.p);
  EXPECT_EQ(a.time, b.time);
}

TEST(Classical, EnergyConservedOverTwoHundredPeriods) {
  const SimParams params = deterministic(0.0);
  for (const PhaseSpacePoint seed : {PhaseSpacePoint{0.0, 1.0}, PhaseSpacePoint{-2.5, 1.0}, PhaseSpacePoint{1.0, 2.5}}) {
    ClassicalState s{seed.x, seed.p, 0.0};
    const double e0 = energy(s, 1.2);
    double worst = 0.0;
    for (int i = 0; i < 200 * 200; ++i) {
      symplectic_step(s, params.dt(), params);
      worst = std::max(worst, std::abs(energy(s, 1.2) - e0));
    }
    EXPECT_LT(worst, 1e-6);
  }
}

TEST(Portrait, IntegrableStrobesLieOnOneContour) {
  const SimParams params = deterministic(0.0);
  const std::vector<PhaseSpacePoint> seeds{{0.0, 1.0}, {-2.5, 1.0}, {2.0, -0.3}};
  const auto points = stroboscopic_portrait(seeds, 300, params);
  ASSERT_EQ(points.size(), seeds.size() * 301);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    double lo = 1e300, hi = -1e300;
    for (const auto& pt : points) {
      if (pt.seed_index != k) continue;
      const double e = 0.5 * pt.p * pt.p - 1.2 * std::cos(pt.x);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
      EXPECT_GE(pt.x, -pi);
      EXPECT_LT(pt.x, pi);
    }
    EXPECT_LE(hi - lo, 1e-5);
  }
}

TEST(Portrait, RegularSeedStaysInIsland) {
  const std::vector<PhaseSpacePoint> seeds{{0.0, 1.0}};
  const auto points = stroboscopic_portrait(seeds, 2000, deterministic(0.2));
  double mean = 0.0;
  for (const auto& pt : points) mean += pt.p;
  mean /= double(points.size());
  double excursion = 0.0;
  for (const auto& pt : points) excursion = std::max(excursion, std::abs(pt.p - mean));
  EXPECT_LE(excursion, 1.0);
}

TEST(Portrait, ChaoticSeedWanders) {
  const std::vector<PhaseSpacePoint> seeds{{-2.5, 1.0}};
  const auto points = stroboscopic_portrait(seeds, 2000, deterministic(0.2));
  const bool high = std::any_of(points.begin(), points.end(), [](const auto& pt) { return std::abs(pt.p) > 1.5; });
  const bool negative = std::any_of(points.begin(), points.end(), [](const auto& pt) { return pt.p < 0.0; });
  EXPECT_TRUE(high);
  EXPECT_TRUE(negative);
}

TEST(Portrait, StrobeOrderAndStart) {
  const std::vector<PhaseSpacePoint> seeds{{0.5, 0.1}, {-1.0, 2.0}};
  const auto points = stroboscopic_portrait(seeds, 3, deterministic(0.2));
  ASSERT_EQ(points.size(), 8u);
  EXPECT_EQ(points[0].strobe_index, 0u);
  EXPECT_DOUBLE_EQ(points[0].x, 0.5);
  EXPECT_DOUBLE_EQ(points[0].p, 0.1);
}

TEST(Portrait, PreservesAreaUnderModulation) {
  const SimParams params = deterministic(0.2);
  const double h = 1e-7;
  ClassicalState a{0.0, 1.0, 0.0}, b{h, 1.0, 0.0}, c{0.0, 1.0 + h, 0.0};
  for (int block = 0; block < 3; ++block) {
    for (int i = 0; i < 100 * params.steps_per_period; ++i) {
      symplectic_step(a, params.dt(), params);
      symplectic_step(b, params.dt(), params);
      symplectic_step(c, params.dt(), params);
    }
    const double area = ((b.x - a.x) * (c.p - a.p) - (b.p - a.p) * (c.x - a.x)) / (h * h);
    EXPECT_NEAR(area, 1.0, 0.01 * (block + 1));
  }
}

TEST(Classical, UnwrappedPositionAndWrappedReport) {
  const SimParams params = deterministic(0.2);
  ClassicalState s{0.0, 3.0, 0.0};
  for (int i = 0; i < 400; ++i) symplectic_step(s, params.dt(), params);
  EXPECT_GT(s.x, pi);
  EXPECT_GE(s.wrapped_x(), -pi);
  EXPECT_LT(s.wrapped_x(), pi);
  EXPECT_NEAR(std::remainder(s.x - s.wrapped_x(), kTwoPi), 0.0, 1e-9);
}

TEST(Classical, DiffusionScaling) {
  SimParams params = deterministic(0.2);
  params.D = 0.01;
  const double x = 1.0, T = kTwoPi;
  const int steps = 200, samples = 10000;
  const double dt = T / steps;
  double sum = 0.0, sum_sq = 0.0;
  for (int k = 0; k < samples; ++k) {
    NoiseStream noise(31, static_cast<std::uint64_t>(k));
    ClassicalState s{x, 0.0, 0.0};
    for (int i = 0; i < steps; ++i) {
      stochastic_kick(s, noise.wiener(dt), params);
      s.time += dt;
    }
    sum += s.p;
    sum_sq += s.p * s.p;
  }
  const double var = sum_sq / samples - (sum / samples) * (sum / samples);
  // one full period averages m(t) to 1
  const double expected = 2.0 * params.D * params.kbar * params.kbar * std::sin(x) * std::sin(x) * T;
  EXPECT_NEAR(var, expected, 0.1 * expected);
}

TEST(QInit, VarianceRelations) {
  const auto q = QInitParams::from_quantum(0.0, 1.0, 0.3906, 0.04, 0.25, 1.2);
  EXPECT_NEAR(q.delta_x, 0.06604, 1e-5);
  EXPECT_NEAR(q.delta_p, 0.17693, 1e-5);
  const auto q0 = QInitParams::from_quantum(0.0, 1.0, 0.3906, 0.0, 0.25, 1.2);
  EXPECT_NEAR(q0.delta_p, 0.13693, 1e-5);
  EXPECT_EQ(q.x0, 0.0);
  EXPECT_EQ(q.p0, 1.0);
}

TEST(QInit, SampleMoments) {
  const auto q = QInitParams::from_quantum(-2.5, 1.0, 0.3906, 0.04, 0.25, 1.2);
  NoiseStream stream(8, 0);
  const std::size_t n = 100000;
  const auto samples = sample_q_initial(q, n, stream);
  ASSERT_EQ(samples.size(), n);
  double mx = 0, mp = 0, vx = 0, vp = 0;
  for (const auto& s : samples) {
    mx += s.x;
    mp += s.p;
  }
  mx /= n;
  mp /= n;
  for (const auto& s : samples) {
    vx += (s.x - mx) * (s.x - mx);
    vp += (s.p - mp) * (s.p - mp);
    EXPECT_EQ(s.time, 0.0);
  }
  vx /= n;
  vp /= n;
  EXPECT_LT(std::abs(mx + 2.5) / std::sqrt(q.delta_x / n), 4.0);
  EXPECT_LT(std::abs(mp - 1.0) / std::sqrt(q.delta_p / n), 4.0);
  EXPECT_NEAR(vx, q.delta_x, 4.0 * q.delta_x * std::sqrt(2.0 / n));
  EXPECT_NEAR(vp, q.delta_p, 4.0 * q.delta_p * std::sqrt(2.0 / n));
}

TEST(ClassifyOrbit, PaperSeeds) {
  const SimParams params = deterministic(0.2);
  const auto regular = classify_orbit(0.0, 1.0, params);
  const auto chaotic = classify_orbit(-2.5, 1.0, params);
  EXPECT_EQ(regular.kind, OrbitKind::regular) << regular.exponent;
  EXPECT_EQ(chaotic.kind, OrbitKind::chaotic) << chaotic.exponent;
  EXPECT_LT(regular.exponent, 0.05);
  EXPECT_GT(chaotic.exponent, 0.05);
}

TEST(ClassifyOrbit, IntegrableIsRegular) {
  const SimParams params = deterministic(0.0);
  for (const PhaseSpacePoint seed : {PhaseSpacePoint{0.0, 1.0}, PhaseSpacePoint{-2.5, 1.0}, PhaseSpacePoint{1.0, 2.5},
                                     PhaseSpacePoint{3.0, 0.1}}) {
    EXPECT_EQ(classify_orbit(seed.x, seed.p, params).kind, OrbitKind::regular) << seed.x << "," << seed.p;
  }
}

TEST(ClassifyOrbit, MirrorSymmetry) {
  const SimParams params = deterministic(0.2);
  for (const PhaseSpacePoint seed : {PhaseSpacePoint{0.0, 1.0}, PhaseSpacePoint{-2.5, 1.0}, PhaseSpacePoint{1.2, 0.4},
                                     PhaseSpacePoint{-0.7, 1.8}}) {
    const auto a = classify_orbit(seed.x, seed.p, params);
    const auto b = classify_orbit(-seed.x, -seed.p, params);
    EXPECT_EQ(a.kind, b.kind);
    // mirrored chaotic paths differ in rounding, which the chaos then amplifies
    const double tol = a.kind == OrbitKind::chaotic ? 1e-3 * a.exponent : 1e-6;
    EXPECT_NEAR(a.exponent, b.exponent, tol);
  }
}
