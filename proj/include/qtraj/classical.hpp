#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtraj/noise.hpp"
#include "qtraj/params.hpp"

namespace qtraj {

/// Phase-space point of the classical pendulum. x is kept unwrapped.
struct ClassicalState {
  double x = 0.0;
  double p = 0.0;
  double time = 0.0;

  double wrapped_x() const;
};

/// Deterministic flow of H0(t) = p^2/2 - xi(t) cos x over dt.
///
/// Fourth-order symplectic composition (Yoshida triple jump) of the
/// kick-drift-kick leapfrog; time advances with the drifts.
void symplectic_step(ClassicalState& s, double dt, const SimParams& params);

/// Ito kick p += sqrt(2 D(t)) kbar sin x dW at the current (x, t). Leaves x and time alone.
void stochastic_kick(ClassicalState& s, const WienerStep& w, const SimParams& params);

/// Euler-Maruyama step of the conditional SDE: stochastic kick, then the
/// symplectic drift over w.dt. With D = 0 this is exactly symplectic_step.
void sde_step(ClassicalState& s, const WienerStep& w, const SimParams& params);

struct PhaseSpacePoint {
  double x = 0.0;
  double p = 0.0;
};

struct StrobePoint {
  std::size_t strobe_index = 0;
  std::size_t seed_index = 0;
  double x = 0.0;  // wrapped to [-pi, pi)
  double p = 0.0;
};

/// Noise-free strobe points at t = 2 pi k, k = 0..n_periods, for each seed.
std::vector<StrobePoint> stroboscopic_portrait(std::span<const PhaseSpacePoint> seeds, int n_periods,
                                               const SimParams& params);

/// Bivariate Gaussian (classical Q function) initial distribution. delta_x and
/// delta_p are variances.
struct QInitParams {
  double x0 = 0.0;
  double p0 = 0.0;
  double delta_x = 0.0;
  double delta_p = 0.0;

  /// delta_x = kbar^2/(2 xi) + kbar^2/(4 sigma_x), delta_p = kbar sqrt(xi)/2 + sigma_p.
  static QInitParams from_quantum(double x0, double p0, double sigma_x, double sigma_p, double kbar, double xi);
};

std::vector<ClassicalState> sample_q_initial(const QInitParams& q, std::size_t n, NoiseStream& stream);

enum class OrbitKind { regular, chaotic };

struct ChaosCriteria {
  int periods = 200;
  double initial_offset = 1e-8;
  double threshold = 0.05;  // mean log growth per period
};

struct OrbitClassification {
  OrbitKind kind = OrbitKind::regular;
  double exponent = 0.0;  // finite-time separation growth rate per period
};

/// Labels a seed by the growth rate of a 1e-8 phase-space offset, renormalized
/// each period (noise-free dynamics).
OrbitClassification classify_orbit(double x0, double p0, const SimParams& params, const ChaosCriteria& criteria = {});

}  // namespace qtraj
