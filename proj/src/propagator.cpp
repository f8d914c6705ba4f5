#include "qtraj/propagator.hpp"

#include <cmath>
#include <stdexcept>

#include "qtraj/errors.hpp"

namespace qtraj {

SplitStepPropagator::SplitStepPropagator(GridPtr grid, const SimParams& params)
    : grid_(std::move(grid)), params_(params), fft_(grid_->size()) {
  if (grid_->kbar() != params_.kbar) throw std::invalid_argument("grid kbar differs from parameter kbar");
  cos_x_.resize(grid_->size());
  for (std::size_t j = 0; j < cos_x_.size(); ++j) cos_x_[j] = std::cos(grid_->x()[j]);
  kinetic_phase_.resize(grid_->size());
}

void SplitStepPropagator::apply_kinetic(WaveFunction& psi, double tau) {
  if (tau != kinetic_tau_) {
    const auto& p = grid_->p();
    const double kbar = grid_->kbar();
    for (std::size_t k = 0; k < p.size(); ++k) kinetic_phase_[k] = std::polar(1.0, -0.5 * p[k] * p[k] * tau / kbar);
    kinetic_tau_ = tau;
  }
  fft_.forward(psi.amps);
  for (std::size_t k = 0; k < psi.amps.size(); ++k) psi.amps[k] *= kinetic_phase_[k];
  fft_.inverse(psi.amps);
}

void SplitStepPropagator::kinetic_half_step(WaveFunction& psi, double dt) { apply_kinetic(psi, 0.5 * dt); }

double SplitStepPropagator::potential_step(WaveFunction& psi, double t, const WienerStep& w) {
  const double mean_j = measurement_moments(psi).mean;
  if (!std::isfinite(mean_j)) throw NumericError("non-finite <J> in potential step");

  const double kbar = grid_->kbar();
  const double xi_t = params_.xi_at(t);
  const double D_t = params_.D_at(t);
  const double dt = w.dt;
  const double dW = w.dW;
  const double damping = D_t * (dt + dW * dW);
  const double drive = std::sqrt(2.0 * D_t) * dW;
  for (std::size_t j = 0; j < psi.amps.size(); ++j) {
    const double dJ = -cos_x_[j] - mean_j;
    const double re = -damping * dJ * dJ + drive * dJ;
    const double im = xi_t * cos_x_[j] * dt / kbar;
    psi.amps[j] *= std::exp(re) * cplx(std::cos(im), std::sin(im));
  }
  psi.normalize();
  return mean_j;
}

void SplitStepPropagator::sse_step(WaveFunction& psi, const WienerStep& w) {
  const double t = psi.time;
  kinetic_half_step(psi, w.dt);
  potential_step(psi, t + 0.5 * w.dt, w);
  kinetic_half_step(psi, w.dt);
  psi.time = t + w.dt;
}

void SplitStepPropagator::advance(WaveFunction& psi, int n_steps, double dt, NoiseStream& noise) {
  if (n_steps <= 0) return;
  const double t0 = psi.time;
  apply_kinetic(psi, 0.5 * dt);
  for (int s = 0; s < n_steps; ++s) {
    const double t = t0 + s * dt;
    double mean_j = 0.0;
    try {
      mean_j = potential_step(psi, t + 0.5 * dt, noise.wiener(dt));
    } catch (const std::domain_error&) {
      throw NumericError("state collapsed to zero norm", -1, s);
    } catch (const NumericError&) {
      throw NumericError("non-finite <J> in potential step", -1, s);
    }
    if (!std::isfinite(mean_j) || !psi.all_finite()) throw NumericError("non-finite state", -1, s);
    apply_kinetic(psi, s + 1 == n_steps ? 0.5 * dt : dt);
  }
  psi.time = t0 + n_steps * dt;
}

std::vector<cplx> apply_hamiltonian(const WaveFunction& psi, double t, const SimParams& params, const Fft& fft) {
  const auto& p = psi.grid->p();
  const auto& x = psi.grid->x();
  std::vector<cplx> kin = psi.amps;
  fft.forward(kin);
  for (std::size_t k = 0; k < kin.size(); ++k) kin[k] *= 0.5 * p[k] * p[k];
  fft.inverse(kin);
  const double xi_t = params.xi_at(t);
  for (std::size_t j = 0; j < kin.size(); ++j) kin[j] -= xi_t * std::cos(x[j]) * psi.amps[j];
  return kin;
}

WaveFunction linear_sse_euler_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params,
                                   const Fft& fft) {
  const auto h_psi = apply_hamiltonian(psi, psi.time, params, fft);
  const double D_t = params.D_at(psi.time);
  const double mean_j = measurement_moments(psi).mean;
  const double current_dt = 4.0 * D_t * mean_j * w.dt + std::sqrt(2.0 * D_t) * w.dW;
  const cplx minus_i_over_kbar{0.0, -1.0 / params.kbar};
  WaveFunction out(psi.grid, psi.amps, psi.time + w.dt);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double J = -std::cos(psi.grid->x()[j]);
    out.amps[j] += minus_i_over_kbar * h_psi[j] * w.dt + (-D_t * J * J * w.dt + current_dt * J) * psi.amps[j];
  }
  return out;
}

WaveFunction nonlinear_sse_euler_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params,
                                      const Fft& fft) {
  const auto h_psi = apply_hamiltonian(psi, psi.time, params, fft);
  const double D_t = params.D_at(psi.time);
  const double mean_j = measurement_moments(psi).mean;
  const cplx minus_i_over_kbar{0.0, -1.0 / params.kbar};
  WaveFunction out(psi.grid, psi.amps, psi.time + w.dt);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double dJ = -std::cos(psi.grid->x()[j]) - mean_j;
    out.amps[j] += minus_i_over_kbar * h_psi[j] * w.dt +
                   (-D_t * dJ * dJ * w.dt + std::sqrt(2.0 * D_t) * dJ * w.dW) * psi.amps[j];
  }
  return out;
}

}  // namespace qtraj
