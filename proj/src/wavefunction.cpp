#include "qtraj/wavefunction.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtraj {

WaveFunction::WaveFunction(GridPtr g, double t) : grid(std::move(g)), time(t) {
  if (!grid) throw std::invalid_argument("wave function needs a grid");
  amps.assign(grid->size(), cplx{0.0, 0.0});
}

WaveFunction::WaveFunction(GridPtr g, std::vector<cplx> a, double t) : grid(std::move(g)), amps(std::move(a)), time(t) {
  if (!grid) throw std::invalid_argument("wave function needs a grid");
  if (amps.size() != grid->size()) throw std::invalid_argument("amplitude count does not match grid");
}

double WaveFunction::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return s * grid->dx();
}

double WaveFunction::normalize() {
  const double nrm = std::sqrt(norm_squared());
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw std::domain_error("cannot normalize a zero or non-finite state");
  const double inv = 1.0 / nrm;
  for (auto& a : amps) a *= inv;
  return nrm;
}

bool WaveFunction::all_finite() const {
  for (const auto& a : amps) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) return false;
  }
  return true;
}

WaveFunction gaussian_state(GridPtr grid, double x0, double p0, double sigma_x) {
  if (!(sigma_x > 0.0)) throw std::invalid_argument("sigma_x must be positive");
  if (!(std::abs(x0) <= std::numbers::pi)) throw std::invalid_argument("|x0| must not exceed pi");
  // |psi|^2 has variance sigma_x; this is the mass beyond the minimum-image cut.
  const double wrapped_tail = std::erfc(std::numbers::pi / std::sqrt(2.0 * sigma_x));
  if (wrapped_tail > 1e-6) {
    throw std::invalid_argument("sigma_x too large: Gaussian does not fit in one period");
  }
  WaveFunction psi(grid);
  const double kbar = grid->kbar();
  const auto& x = grid->x();
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double d = wrap_to_period(x[j] - x0);
    const double envelope = std::exp(-d * d / (4.0 * sigma_x));
    psi.amps[j] = std::polar(envelope, p0 * (x0 + d) / kbar);
  }
  psi.normalize();
  return psi;
}

Moments position_moments(const WaveFunction& psi) {
  const auto& x = psi.grid->x();
  const double dx = psi.grid->dx();
  cplx phasor{0.0, 0.0};
  for (std::size_t j = 0; j < psi.size(); ++j) phasor += std::norm(psi.amps[j]) * std::polar(1.0, x[j]);
  const double centre = std::abs(phasor) > 0.0 ? std::arg(phasor) : 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double w = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double rho = std::norm(psi.amps[j]) * dx;
    const double d = wrap_to_period(x[j] - centre);
    m1 += rho * d;
    m2 += rho * d * d;
    w += rho;
  }
  m1 /= w;
  m2 /= w;
  return {centre + m1, m2 - m1 * m1 + (centre + m1) * (centre + m1)};
}

std::vector<cplx> momentum_amplitudes(const WaveFunction& psi, const Fft& fft) {
  std::vector<cplx> phi = psi.amps;
  fft.forward(phi);
  // sum_k |X_k|^2 = n sum_j |psi_j|^2 = n / dx for a normalized state
  const double scale = std::sqrt(psi.grid->dx() / (static_cast<double>(psi.size()) * psi.grid->kbar()));
  for (auto& v : phi) v *= scale;
  return phi;
}

Moments momentum_moments(const WaveFunction& psi, const Fft& fft) {
  const auto phi = momentum_amplitudes(psi, fft);
  const auto& p = psi.grid->p();
  double w = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 0; k < phi.size(); ++k) {
    const double prob = std::norm(phi[k]);
    w += prob;
    m1 += prob * p[k];
    m2 += prob * p[k] * p[k];
  }
  return {m1 / w, m2 / w};
}

Moments measurement_moments(const WaveFunction& psi) {
  const auto& x = psi.grid->x();
  double w = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const double rho = std::norm(psi.amps[j]);
    const double J = -std::cos(x[j]);
    w += rho;
    m1 += rho * J;
    m2 += rho * J * J;
  }
  return {m1 / w, m2 / w};
}

void apply_momentum_kick(WaveFunction& psi, double a) {
  const auto& x = psi.grid->x();
  const double kbar = psi.grid->kbar();
  for (std::size_t j = 0; j < psi.size(); ++j) psi.amps[j] *= std::polar(1.0, a * x[j] / kbar);
}

cplx inner_product(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid || !b.grid || !(*a.grid == *b.grid)) throw std::invalid_argument("states live on different grids");
  cplx s{0.0, 0.0};
  for (std::size_t j = 0; j < a.size(); ++j) s += std::conj(a.amps[j]) * b.amps[j];
  return s * a.grid->dx();
}

}  // namespace qtraj
