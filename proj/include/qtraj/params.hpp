#pragma once

#include <cstdint>
#include <numbers>
#include <optional>

namespace qtraj {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kHbar = 1.054571817e-34;  // J s

/// Physical constants of the driven atom-cavity system (SI units, rates in rad/s).
struct PhysicalParams {
  double g = 0.0;      // atom-field coupling
  double E0 = 0.0;     // drive amplitude
  double Delta = 0.0;  // atom-laser detuning
  double kappa = 0.0;  // cavity decay
  double kL = 0.0;     // laser wavenumber (1/m)
  double M = 0.0;      // atomic mass (kg)
  double omega = 0.0;  // modulation frequency
};

/// Thresholds for the far-detuned and weak-drive approximations.
struct AssumptionLimits {
  double min_detuning_ratio = 10.0;  // Delta >= ratio * g
  double max_drive_ratio = 0.1;      // E0 / kappa <= ratio
};

/// Dimensionless model constants plus discretization settings.
struct SimParams {
  double kbar = 0.25;
  double xi = 1.2;
  double D = 0.001;
  double epsilon = 0.2;
  int steps_per_period = 200;
  int n_periods = 200;
  int grid_size = 256;
  std::uint64_t seed = 1;
  std::optional<PhysicalParams> provenance;

  /// Throws std::invalid_argument naming the first violated invariant.
  void validate() const;

  double dt() const { return kTwoPi / steps_per_period; }
  double xi_at(double t) const;
  double D_at(double t) const;
};

/// m(t) = 1 - 2 epsilon cos t, shared by the well depth and the diffusion constant.
double modulation_factor(double t, double epsilon);

/// Scales the physical model onto the pendulum units (time in 1/omega).
SimParams dimensionless_from_physical(const PhysicalParams& pp, const AssumptionLimits& limits = {});

}  // namespace qtraj
