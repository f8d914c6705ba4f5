#pragma once

#include <complex>
#include <span>
#include <vector>

#include "qtraj/fft.hpp"
#include "qtraj/grid.hpp"

namespace qtraj {

/// Conditional state sampled on a Grid; normalized so that sum |psi_j|^2 dx = 1.
struct WaveFunction {
  GridPtr grid;
  std::vector<cplx> amps;
  double time = 0.0;

  WaveFunction() = default;
  explicit WaveFunction(GridPtr g, double t = 0.0);
  WaveFunction(GridPtr g, std::vector<cplx> a, double t = 0.0);

  std::size_t size() const { return amps.size(); }
  double norm_squared() const;
  /// Rescales to unit norm and returns the norm before rescaling.
  double normalize();
  bool all_finite() const;
};

struct Moments {
  double mean = 0.0;
  double mean_sq = 0.0;
  double variance() const { return mean_sq - mean * mean; }
};

/// Minimum-uncertainty Gaussian with position variance sigma_x centred on (x0, p0).
///
/// Uses the minimum-image displacement from x0, so a packet near the boundary
/// wraps around; rejects widths whose wrapped tail exceeds 1e-6 of the norm.
WaveFunction gaussian_state(GridPtr grid, double x0, double p0, double sigma_x);

/// Position mean and variance about the circular centre of |psi|^2.
Moments position_moments(const WaveFunction& psi);
Moments momentum_moments(const WaveFunction& psi, const Fft& fft);
/// Moments of J = -cos x.
Moments measurement_moments(const WaveFunction& psi);

/// Momentum amplitudes in FFT order, scaled so that sum |phi_k|^2 * kbar = 1.
std::vector<cplx> momentum_amplitudes(const WaveFunction& psi, const Fft& fft);

/// Multiplies by exp(i a x / kbar); a multiple of kbar shifts every momentum by a.
void apply_momentum_kick(WaveFunction& psi, double a);

/// <a|b> = sum conj(a_j) b_j dx. Throws std::invalid_argument on grid mismatch.
cplx inner_product(const WaveFunction& a, const WaveFunction& b);

}  // namespace qtraj
