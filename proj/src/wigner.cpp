#include "qtraj/wigner.hpp"

#include "qtraj/params.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qtraj {

namespace {

// psi on the 2n half-spaced grid; even entries reproduce psi exactly.
std::vector<cplx> refine_twofold(const WaveFunction& psi, const Fft& fft_n, const Fft& fft_2n) {
  const std::size_t n = psi.size();
  std::vector<cplx> coeff = psi.amps;
  fft_n.forward(coeff);
  std::vector<cplx> fine(2 * n, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < n / 2; ++k) fine[k] = coeff[k];
  for (std::size_t k = n / 2 + 1; k < n; ++k) fine[n + k] = coeff[k];
  // Nyquist term split symmetrically so the interpolant is a cosine.
  fine[n / 2] = 0.5 * coeff[n / 2];
  fine[n + n / 2] = 0.5 * coeff[n / 2];
  fft_2n.backward_unscaled(fine);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& v : fine) v *= scale;
  return fine;
}

}  // namespace

double WignerGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dx * dp;
}

WignerGrid wigner_transform(const WaveFunction& psi) {
  const Grid& grid = *psi.grid;
  const std::size_t n = grid.size();
  const double kbar = grid.kbar();
  const Fft fft_n(n);
  const Fft fft_2n(2 * n);
  const auto fine = refine_twofold(psi, fft_n, fft_2n);

  WignerGrid w;
  w.nx = n;
  w.np = n;
  w.dx = grid.dx();
  w.dp = kbar;
  w.x = grid.x();
  w.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.p[i] = kbar * (static_cast<double>(i) - static_cast<double>(n / 2));
  w.values.assign(n * n, 0.0);

  const std::size_t n2 = 2 * n;
  const auto half = static_cast<long>(n / 2);
  const double prefactor = grid.dx() / (kTwoPi * kbar);
  std::vector<cplx> row(n);
  std::vector<cplx> wide(n2);
  w.doubled.assign(n * n2, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto centre = static_cast<long>(2 * j);
    // y = m dx for m in [-n/2, n/2); on the fine grid x -+ y/2 is centre -+ m.
    for (long m = -half; m < half; ++m) {
      const auto lo = static_cast<std::size_t>(((centre - m) % static_cast<long>(n2) + static_cast<long>(n2)) %
                                               static_cast<long>(n2));
      const auto hi = static_cast<std::size_t>((centre + m) % static_cast<long>(n2) + static_cast<long>(n2)) % n2;
      const auto slot = static_cast<std::size_t>((m + static_cast<long>(n)) % static_cast<long>(n));
      row[slot] = fine[lo] * std::conj(fine[hi]);
    }
    // The window edge m = -n/2 has no partner at +n/2; use the symmetric average.
    row[n / 2] = cplx{row[n / 2].real(), 0.0};
    fft_n.backward_unscaled(row);
    for (std::size_t k = 0; k < n; ++k) {
      // FFT bin k holds momentum index k (k < n/2) or k - n; store ascending.
      const std::size_t out = (k + n / 2) % n;
      w.values[j * n + out] = prefactor * row[k].real();
      w.max_imag = std::max(w.max_imag, std::abs(prefactor * row[k].imag()));
    }

    for (long m = -static_cast<long>(n); m < static_cast<long>(n); ++m) {
      const auto lo = static_cast<std::size_t>(((centre - m) % static_cast<long>(n2) + static_cast<long>(n2)) %
                                               static_cast<long>(n2));
      const auto hi = static_cast<std::size_t>((centre + m) % static_cast<long>(n2) + static_cast<long>(n2)) % n2;
      wide[static_cast<std::size_t>((m + static_cast<long>(n2)) % static_cast<long>(n2))] = fine[lo] * std::conj(fine[hi]);
    }
    fft_2n.backward_unscaled(wide);
    for (std::size_t l = 0; l < n2; ++l) {
      w.doubled[j * n2 + (l + n) % n2] = prefactor * wide[l].real();
      w.max_imag = std::max(w.max_imag, std::abs(prefactor * wide[l].imag()));
    }
  }
  return w;
}

Marginals marginals(const WignerGrid& w) {
  Marginals m;
  m.position.assign(w.nx, 0.0);
  m.momentum.assign(w.np, 0.0);
  for (std::size_t i = 0; i < w.nx; ++i) {
    for (std::size_t k = 0; k < w.np; ++k) {
      m.position[i] += w(i, k) * w.dp;
      m.momentum[k] += w(i, k) * w.dx;
    }
  }
  return m;
}

double wigner_overlap(const WignerGrid& a, const WignerGrid& b, double kbar) {
  if (a.nx != b.nx || a.np != b.np || a.doubled.size() != b.doubled.size()) {
    throw std::invalid_argument("Wigner grids differ in shape");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.doubled.size(); ++i) s += a.doubled[i] * b.doubled[i];
  return 0.5 * std::numbers::pi * kbar * kbar * s * a.dx;
}

}  // namespace qtraj
