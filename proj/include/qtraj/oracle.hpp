#pragma once

#include <Eigen/Dense>

#include "qtraj/noise.hpp"
#include "qtraj/params.hpp"
#include "qtraj/wavefunction.hpp"

namespace qtraj {

/// Largest grid accepted by the dense reference integrators.
inline constexpr std::size_t kDenseOracleMaxSize = 64;

/// Kinetic operator p^2/2 as a dense Hermitian matrix in the position basis,
/// built from explicit Fourier sums.
Eigen::MatrixXcd dense_kinetic_matrix(const Grid& grid);

/// Reference for SplitStepPropagator::sse_step built from dense matrix
/// exponentials (no FFT). Same Strang order, midpoint time and <J>_c placement.
WaveFunction dense_oracle_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params);

/// rho(x, x') on a small grid, normalized so that trace(rho) dx = 1.
struct DensityMatrix {
  GridPtr grid;
  Eigen::MatrixXcd rho;
  double time = 0.0;

  double trace() const;   // trace(rho) dx
  double purity() const;  // trace(rho^2) dx^2
  double hermiticity_error() const;
  /// Smallest eigenvalue of rho dx.
  double min_eigenvalue() const;
};

DensityMatrix pure_density(const WaveFunction& psi);

/// Adds w |psi><psi| into `acc` (acc.rho must already be sized).
void accumulate_projector(DensityMatrix& acc, const WaveFunction& psi, double weight);

/// One step of d rho/dt = -(i/kbar)[H0(t), rho] - D(t) [J, [J, rho]] by classical
/// RK4, substepping internally so the explicit scheme stays stable.
/// Throws NumericError if the trace drifts by more than 1e-6.
DensityMatrix master_eq_step(const DensityMatrix& rho, double dt, const SimParams& params);

/// 0.5 * || (a - b) dx ||_1
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qtraj
