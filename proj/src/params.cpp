#include "qtraj/params.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtraj {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void SimParams::validate() const {
  require(std::isfinite(kbar) && kbar > 0.0, "kbar must be positive");
  require(std::isfinite(xi) && xi > 0.0, "xi must be positive");
  require(std::isfinite(D) && D >= 0.0, "D must be non-negative");
  require(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon < 0.5,
          "epsilon must lie in [0, 0.5) so that 1 - 2 epsilon cos t stays positive");
  require(steps_per_period >= 1, "steps_per_period must be >= 1");
  require(n_periods >= 0, "n_periods must be >= 0");
  require(grid_size >= 16 && std::has_single_bit(static_cast<unsigned>(grid_size)),
          "grid_size must be a power of two >= 16");
}

double SimParams::xi_at(double t) const { return xi * modulation_factor(t, epsilon); }

double SimParams::D_at(double t) const { return D * modulation_factor(t, epsilon); }

double modulation_factor(double t, double epsilon) { return 1.0 - 2.0 * epsilon * std::cos(t); }

SimParams dimensionless_from_physical(const PhysicalParams& pp, const AssumptionLimits& limits) {
  const auto positive = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw std::invalid_argument(std::string(name) + " must be strictly positive");
    }
  };
  positive(pp.g, "g");
  positive(pp.E0, "E0");
  positive(pp.Delta, "Delta");
  positive(pp.kappa, "kappa");
  positive(pp.kL, "kL");
  positive(pp.M, "M");
  positive(pp.omega, "omega");
  if (pp.Delta < limits.min_detuning_ratio * pp.g) {
    throw std::invalid_argument("large-detuning assumption violated: Delta must be >= " +
                                std::to_string(limits.min_detuning_ratio) + " * g");
  }
  if (pp.E0 / pp.kappa > limits.max_drive_ratio) {
    throw std::invalid_argument("weak-drive assumption violated: E0/kappa must be <= " +
                                std::to_string(limits.max_drive_ratio));
  }

  const double g2 = pp.g * pp.g;
  const double E02 = pp.E0 * pp.E0;
  const double k2 = pp.kappa * pp.kappa;
  const double diffusion = 2.0 * g2 * g2 * E02 / (pp.Delta * pp.Delta * k2 * pp.kappa);
  const double chi = 2.0 * g2 * E02 / (pp.Delta * k2);
  const double scale = 4.0 * pp.kL * pp.kL / (pp.M * pp.omega);

  SimParams out;
  out.kbar = kHbar * scale;
  out.D = diffusion / pp.omega;
  out.xi = scale / pp.omega * kHbar * chi;
  out.provenance = pp;
  return out;
}

}  // namespace qtraj
