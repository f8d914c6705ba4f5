#pragma once

#include <vector>

#include "qtraj/wavefunction.hpp"

namespace qtraj {

/// Wigner quasi-probability P(x_j, p_k) on the state's position grid and
/// momentum grid. Momenta are stored ascending (-n/2 .. n/2-1 in units of kbar).
struct WignerGrid {
  std::size_t nx = 0;
  std::size_t np = 0;
  double dx = 0.0;
  double dp = 0.0;
  std::vector<double> x;
  std::vector<double> p;
  std::vector<double> values;  // row-major, values[ix * np + ip]
  double max_imag = 0.0;       // largest discarded imaginary part
  /// P on the doubled momentum lattice p = l kbar/2, l in [-n, n), from the
  /// two-period window y in [-2 pi, 2 pi). Row-major, nx * 2 np. Feeds wigner_overlap.
  std::vector<double> doubled;

  double operator()(std::size_t ix, std::size_t ip) const { return values[ix * np + ip]; }
  double integral() const;
};

/// P(x, p) = (1/(2 pi kbar)) sum_y psi(x - y/2) conj(psi(x + y/2)) exp(i p y / kbar) dy
/// with y running over one period [-pi, pi) on the grid spacing.
///
/// x +- y/2 falls on the half-spaced grid, which is filled by exact
/// trigonometric (zero-padded spectral) refinement of psi to 2n points. Both
/// marginals are then exact on the grid, apart from content in the Nyquist
/// mode, which the refinement splits between +-n/2.
WignerGrid wigner_transform(const WaveFunction& psi);

struct Marginals {
  std::vector<double> position;  // integrated over p, per x_j
  std::vector<double> momentum;  // integrated over x, per ascending p_k
};

Marginals marginals(const WignerGrid& w);

/// |<a|b>|^2 from the doubled-lattice grids: pi kbar sum P_a P_b dx (kbar/2).
///
/// On a ring the one-period grid smears cross terms whose momentum sum is odd,
/// so the overlap is taken on the doubled lattice, where it is exact for states
/// band-limited to |p| < kbar n/4.
double wigner_overlap(const WignerGrid& a, const WignerGrid& b, double kbar);

}  // namespace qtraj
