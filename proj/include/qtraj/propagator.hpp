#pragma once

#include <vector>

#include "qtraj/fft.hpp"
#include "qtraj/noise.hpp"
#include "qtraj/params.hpp"
#include "qtraj/wavefunction.hpp"

namespace qtraj {

/// Strang-split integrator for the normalized homodyne SSE.
///
/// One step is K(dt/2) V(dt) K(dt/2): the kinetic factors are diagonal in
/// momentum space, the potential factor is diagonal in position and carries the
/// measurement back-action
///
///   exp[ i xi(t) cos x dt/kbar - D(t) dJ^2 (dt + dW^2) + sqrt(2 D(t)) dJ dW ],
///   dJ = J(x) - <J>_c,  J = -cos x,
///
/// evaluated at the midpoint time with <J>_c taken on the state entering the
/// potential factor. The state is renormalized after every potential factor.
///
/// Instances own FFT plans and scratch data: use one per worker thread.
class SplitStepPropagator {
 public:
  SplitStepPropagator(GridPtr grid, const SimParams& params);

  const SimParams& params() const { return params_; }
  const Grid& grid() const { return *grid_; }
  const Fft& fft() const { return fft_; }

  /// Multiplies momentum amplitudes by exp(-i p^2 dt / (4 kbar)).
  void kinetic_half_step(WaveFunction& psi, double dt);
  /// Applies the potential factor for time t; returns <J>_c of the input state.
  double potential_step(WaveFunction& psi, double t, const WienerStep& w);
  /// One full step starting at psi.time; advances psi.time by w.dt.
  void sse_step(WaveFunction& psi, const WienerStep& w);
  /// n_steps consecutive steps of size dt drawing noise from `noise`.
  ///
  /// Adjacent kinetic half steps are fused, so the result equals repeated
  /// sse_step up to rounding. Throws NumericError on a non-finite state.
  void advance(WaveFunction& psi, int n_steps, double dt, NoiseStream& noise);

 private:
  void apply_kinetic(WaveFunction& psi, double tau);

  GridPtr grid_;
  SimParams params_;
  Fft fft_;
  std::vector<double> cos_x_;
  std::vector<cplx> kinetic_phase_;
  double kinetic_tau_ = -1.0;
};

/// H0(t) psi with H0 = p^2/2 - xi(t) cos x (kinetic part spectral).
std::vector<cplx> apply_hamiltonian(const WaveFunction& psi, double t, const SimParams& params, const Fft& fft);

/// Euler step of the linear (unnormalized) SSE,
/// d psi = dt [-i H0/kbar - D J^2 + I_A J] psi with I_A dt = 4 D <J> dt + sqrt(2D) dW.
WaveFunction linear_sse_euler_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params,
                                   const Fft& fft);

/// Euler step of the normalized nonlinear SSE,
/// d psi = [(-i H0/kbar - D dJ^2) dt + sqrt(2D) dJ dW] psi. Output is not renormalized.
WaveFunction nonlinear_sse_euler_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params,
                                      const Fft& fft);

}  // namespace qtraj
