#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtraj/fft.hpp"
#include "qtraj/wigner.hpp"

using namespace qtraj;
using std::numbers::pi;

namespace {

// Trigonometric interpolant of the grid samples by direct Fourier sums, with the
// Nyquist mode split between +n/2 and -n/2.
struct Interpolant {
  std::vector<cplx> c;  // index m + n/2 for m in [-n/2, n/2]
  long n;
  const Grid* g;

  explicit Interpolant(const WaveFunction& psi) : n(static_cast<long>(psi.size())), g(psi.grid.get()) {
    c.assign(n + 1, 0.0);
    for (long m = -n / 2; m <= n / 2; ++m) {
      cplx s = 0.0;
      for (long j = 0; j < n; ++j) s += psi.amps[j] * std::polar(1.0, -double(m) * (g->x()[j] + pi));
      s /= double(n);
      if (std::abs(m) == n / 2) s *= 0.5;
      c[m + n / 2] = s;
    }
  }
  cplx operator()(double x) const {
    cplx s = 0.0;
    for (long m = -n / 2; m <= n / 2; ++m) s += c[m + n / 2] * std::polar(1.0, double(m) * (x + pi));
    return s;
  }
};

// Closed-window trapezoid over y in [-pi, pi] at spacing dx.
double wigner_quadrature(const Interpolant& f, double x, double p, double kbar, double dx) {
  const long half = f.n / 2;
  cplx s = 0.0;
  for (long m = -half; m <= half; ++m) {
    const double y = dx * double(m);
    const double w = std::abs(m) == half ? 0.5 : 1.0;
    s += w * f(x - 0.5 * y) * std::conj(f(x + 0.5 * y)) * std::polar(1.0, p * y / kbar);
  }
  return s.real() * dx / (2.0 * pi * kbar);
}

WaveFunction random_state(GridPtr g, std::uint64_t seed, long band = -1) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  WaveFunction psi(g);
  const long n = static_cast<long>(g->size());
  if (band < 0) {
    for (auto& a : psi.amps) a = {n01(rng), n01(rng)};
  } else {
    for (long m = -band; m <= band; ++m) {
      const cplx c{n01(rng), n01(rng)};
      for (long j = 0; j < n; ++j) psi.amps[j] += c * std::polar(1.0, double(m) * g->x()[j]);
    }
  }
  psi.normalize();
  return psi;
}

std::vector<double> momentum_density_ascending(const WaveFunction& psi) {
  Fft fft(psi.size());
  const auto phi = momentum_amplitudes(psi, fft);
  const std::size_t n = psi.size();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[(k + n / 2) % n] = std::norm(phi[k]);
  return out;
}

}  // namespace

TEST(Wigner, NarrowGaussianClosedForm) {
  const double kbar = 0.25, sx = 0.08, x0 = 0.3, p0 = 1.0;
  const auto g = make_grid(256, kbar);
  const WignerGrid w = wigner_transform(gaussian_state(g, x0, p0, sx));
  double worst = 0.0;
  for (std::size_t i = 0; i < w.nx; ++i) {
    for (std::size_t k = 0; k < w.np; ++k) {
      const double dxv = w.x[i] - x0, dpv = w.p[k] - p0;
      const double exact = std::exp(-dxv * dxv / (2.0 * sx) - 2.0 * sx * dpv * dpv / (kbar * kbar)) / (pi * kbar);
      worst = std::max(worst, std::abs(w(i, k) - exact));
    }
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Wigner, ReferenceGaussianMatchesWindowedQuadrature) {
  const double kbar = 0.25;
  const auto g = make_grid(64, kbar);
  const WaveFunction psi = gaussian_state(g, 0.0, 1.0, 0.3906);
  const WignerGrid w = wigner_transform(psi);
  const Interpolant f(psi);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.nx; i += 3) {
    for (std::size_t k = 0; k < w.np; k += 2) {
      worst = std::max(worst, std::abs(w(i, k) - wigner_quadrature(f, w.x[i], w.p[k], kbar, g->dx())));
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(Wigner, RandomStateMatchesWindowedQuadrature) {
  const auto g = make_grid(32, 0.25);
  const WaveFunction psi = random_state(g, 3);
  const WignerGrid w = wigner_transform(psi);
  const Interpolant f(psi);
  for (std::size_t i = 0; i < w.nx; i += 5) {
    for (std::size_t k = 0; k < w.np; ++k) {
      EXPECT_NEAR(w(i, k), wigner_quadrature(f, w.x[i], w.p[k], 0.25, g->dx()), 1e-10);
    }
  }
}

TEST(Wigner, InterpolantReproducesSamples) {
  const auto g = make_grid(32, 0.25);
  const WaveFunction psi = random_state(g, 4);
  const Interpolant f(psi);
  for (std::size_t j = 0; j < 32; ++j) EXPECT_LT(std::abs(f(g->x()[j]) - psi.amps[j]), 1e-12);
}

TEST(Wigner, NormalizationAndMarginals) {
  const auto g = make_grid(128, 0.25);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    // every mode below Nyquist populated; the Nyquist mode itself is ambiguous on the grid
    for (const WaveFunction& psi : {random_state(g, seed, 63), gaussian_state(g, -2.5, 1.0, 0.3906)}) {
      const WignerGrid w = wigner_transform(psi);
      EXPECT_NEAR(w.integral(), 1.0, 1e-8);
      EXPECT_LE(w.max_imag, 1e-10);
      const Marginals m = marginals(w);
      const auto pd = momentum_density_ascending(psi);
      for (std::size_t j = 0; j < 128; ++j) {
        EXPECT_NEAR(m.position[j], std::norm(psi.amps[j]), 1e-8);
        EXPECT_NEAR(m.momentum[j], pd[j], 1e-8);
        EXPECT_GE(m.position[j], -1e-10);
        EXPECT_GE(m.momentum[j], -1e-10);
      }
    }
  }
}

TEST(Wigner, GaussianPositionMarginal) {
  const double sx = 0.3906;
  const auto g = make_grid(256, 0.25);
  const Marginals m = marginals(wigner_transform(gaussian_state(g, 0.0, 1.0, sx)));
  for (std::size_t j = 0; j < 256; ++j) {
    const double x = g->x()[j];
    const double normal = std::exp(-x * x / (2.0 * sx)) / std::sqrt(2.0 * pi * sx);
    EXPECT_NEAR(m.position[j], normal, 1e-6);
  }
}

TEST(Wigner, PlaneWaveMomentumMarginal) {
  const auto g = make_grid(64, 0.25);
  WaveFunction psi(g);
  for (std::size_t j = 0; j < 64; ++j) psi.amps[j] = std::polar(1.0, 3.0 * g->x()[j]);
  psi.normalize();
  const WignerGrid w = wigner_transform(psi);
  const Marginals m = marginals(w);
  const std::size_t peak = 32 + 3;
  EXPECT_DOUBLE_EQ(w.p[peak], 0.75);
  EXPECT_NEAR(m.momentum[peak], 1.0 / 0.25, 1e-10);
  for (std::size_t k = 0; k < 64; ++k) {
    if (k != peak) EXPECT_NEAR(m.momentum[k], 0.0, 1e-10);
  }
}

TEST(Wigner, CatStateHasNegativeRegions) {
  const auto g = make_grid(128, 0.25);
  const WaveFunction a = gaussian_state(g, -1.2, 0.0, 0.05);
  const WaveFunction b = gaussian_state(g, 1.2, 0.0, 0.05);
  WaveFunction cat(g);
  for (std::size_t j = 0; j < 128; ++j) cat.amps[j] = a.amps[j] + b.amps[j];
  cat.normalize();
  const WignerGrid w = wigner_transform(cat);
  double lowest = 0.0;
  for (double v : w.values) lowest = std::min(lowest, v);
  EXPECT_LT(lowest, -0.1 / (pi * 0.25));
  EXPECT_NEAR(w.integral(), 1.0, 1e-8);
}

TEST(Wigner, ParityCovariance) {
  const std::size_t n = 64;
  const auto g = make_grid(n, 0.25);
  const WaveFunction psi = random_state(g, 9);
  WaveFunction mirrored(g);
  for (std::size_t j = 0; j < n; ++j) mirrored.amps[(n - j) % n] = psi.amps[j];
  const WignerGrid a = wigner_transform(psi);
  const WignerGrid b = wigner_transform(mirrored);
  // -p_k is on the grid for every k except the lowest momentum
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 1; k < n; ++k) EXPECT_NEAR(b((n - i) % n, n - k), a(i, k), 1e-12);
  }
}

TEST(Wigner, DoubledLatticeNormalizationAndPositionMarginal) {
  const std::size_t n = 64;
  const auto g = make_grid(n, 0.25);
  const WaveFunction psi = random_state(g, 21, 31);
  const WignerGrid w = wigner_transform(psi);
  ASSERT_EQ(w.doubled.size(), n * 2 * n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t l = 0; l < 2 * n; ++l) row += w.doubled[i * 2 * n + l] * 0.125;
    EXPECT_NEAR(row, std::norm(psi.amps[i]), 1e-10);
    total += row * w.dx;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Wigner, OverlapFormulaForGaussians) {
  const auto g = make_grid(128, 0.25);
  const WaveFunction a = gaussian_state(g, -0.5, 0.3, 0.3906);
  const WaveFunction b = gaussian_state(g, 0.4, 0.1, 0.3);
  EXPECT_NEAR(wigner_overlap(wigner_transform(a), wigner_transform(b), 0.25), std::norm(inner_product(a, b)), 1e-10);
}

TEST(Wigner, OverlapFormulaForBandLimitedStates) {
  const std::size_t n = 64;
  const auto g = make_grid(n, 0.25);
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const WaveFunction a = random_state(g, seed, 15);
    const WaveFunction b = random_state(g, seed + 100, 15);
    const double direct = std::norm(inner_product(a, b));
    EXPECT_NEAR(wigner_overlap(wigner_transform(a), wigner_transform(b), 0.25), direct, 1e-6);
    EXPECT_NEAR(wigner_overlap(wigner_transform(a), wigner_transform(a), 0.25), 1.0, 1e-6);
  }
}
