#include "qtraj/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qtraj/errors.hpp"

namespace qtraj {

namespace {

void check_size(const Grid& grid) {
  if (grid.size() > kDenseOracleMaxSize) {
    throw std::invalid_argument("dense reference integrators are limited to grids of at most 64 points");
  }
}

Eigen::VectorXd cos_x(const Grid& grid) {
  Eigen::VectorXd c(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) c(j) = std::cos(grid.x()[j]);
  return c;
}

}  // namespace

Eigen::MatrixXcd dense_kinetic_matrix(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double kbar = grid.kbar();
  const auto& x = grid.x();
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      cplx s{0.0, 0.0};
      for (long m = -n / 2; m < n / 2; ++m) {
        const double p = kbar * static_cast<double>(m);
        s += 0.5 * p * p * std::polar(1.0, static_cast<double>(m) * (x[a] - x[b]));
      }
      T(a, b) = s / static_cast<double>(n);
    }
  }
  return T;
}

WaveFunction dense_oracle_step(const WaveFunction& psi, const WienerStep& w, const SimParams& params) {
  const Grid& grid = *psi.grid;
  check_size(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double kbar = grid.kbar();
  const Eigen::MatrixXcd generator = dense_kinetic_matrix(grid) * cplx(0.0, -0.5 * w.dt / kbar);
  const Eigen::MatrixXcd half_kinetic = generator.exp();

  Eigen::VectorXcd v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = psi.amps[j];
  v = half_kinetic * v;

  const Eigen::VectorXd c = cos_x(grid);
  const Eigen::VectorXd prob = v.cwiseAbs2();
  const double mean_j = -(prob.dot(c)) / prob.sum();
  const double t_mid = psi.time + 0.5 * w.dt;
  const double xi_t = params.xi_at(t_mid);
  const double D_t = params.D_at(t_mid);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double dJ = -c(j) - mean_j;
    // -i V dt / kbar with V = -xi cos x - i kbar [D dJ^2 (1 + dW^2/dt) - sqrt(2D) dJ dW/dt]
    const cplx exponent{-D_t * dJ * dJ * (w.dt + w.dW * w.dW) + std::sqrt(2.0 * D_t) * dJ * w.dW,
                        xi_t * c(j) * w.dt / kbar};
    v(j) *= std::exp(exponent);
  }
  v /= std::sqrt(v.squaredNorm() * grid.dx());
  v = half_kinetic * v;

  WaveFunction out(psi.grid, psi.time + w.dt);
  for (Eigen::Index j = 0; j < n; ++j) out.amps[j] = v(j);
  return out;
}

double DensityMatrix::trace() const { return rho.trace().real() * grid->dx(); }

double DensityMatrix::purity() const {
  const double dx = grid->dx();
  return (rho * rho).trace().real() * dx * dx;
}

double DensityMatrix::hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho * grid->dx(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix pure_density(const WaveFunction& psi) {
  check_size(*psi.grid);
  DensityMatrix out{psi.grid, Eigen::MatrixXcd::Zero(psi.size(), psi.size()), psi.time};
  accumulate_projector(out, psi, 1.0);
  return out;
}

void accumulate_projector(DensityMatrix& acc, const WaveFunction& psi, double weight) {
  const auto n = static_cast<Eigen::Index>(psi.size());
  Eigen::Map<const Eigen::VectorXcd> v(psi.amps.data(), n);
  acc.rho.noalias() += weight * (v * v.adjoint());
}

DensityMatrix master_eq_step(const DensityMatrix& rho, double dt, const SimParams& params) {
  const Grid& grid = *rho.grid;
  check_size(grid);
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double kbar = grid.kbar();
  const Eigen::MatrixXcd T = dense_kinetic_matrix(grid);
  const Eigen::VectorXd c = cos_x(grid);
  Eigen::MatrixXd dephasing(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) dephasing(a, b) = (c(a) - c(b)) * (c(a) - c(b));
  }

  const auto rhs = [&](const Eigen::MatrixXcd& r, double t) -> Eigen::MatrixXcd {
    Eigen::MatrixXcd H = T;
    H.diagonal().array() -= params.xi_at(t) * c.array();
    Eigen::MatrixXcd out = (H * r - r * H) * cplx(0.0, -1.0 / kbar);
    out.array() -= params.D_at(t) * dephasing.array() * r.array();
    return out;
  };

  // Spectral radius bound of the generator; RK4 is stable on the imaginary axis up to ~2.8.
  const double pmax = kbar * static_cast<double>(n) / 2.0;
  const double hmax = 0.5 * pmax * pmax + 3.0 * params.xi;
  const double radius = 2.0 * hmax / kbar + 4.0 * params.D * 3.0;
  const int substeps = std::max(1, static_cast<int>(std::ceil(std::abs(dt) * radius / 1.0)));
  const double h = dt / substeps;

  DensityMatrix out = rho;
  const double trace0 = rho.trace();
  double t = rho.time;
  for (int s = 0; s < substeps; ++s) {
    const Eigen::MatrixXcd k1 = rhs(out.rho, t);
    const Eigen::MatrixXcd k2 = rhs(out.rho + 0.5 * h * k1, t + 0.5 * h);
    const Eigen::MatrixXcd k3 = rhs(out.rho + 0.5 * h * k2, t + 0.5 * h);
    const Eigen::MatrixXcd k4 = rhs(out.rho + h * k3, t + h);
    out.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = rho.time + (s + 1) * h;
  }
  out.time = rho.time + dt;
  const double drift = std::abs(out.trace() - trace0);
  if (!(drift <= 1e-6)) {
    std::ostringstream msg;
    msg << "master equation trace drift " << drift << " at t=" << out.time << " (dt=" << dt
        << ", substeps=" << substeps << ")";
    throw NumericError(msg.str());
  }
  return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (!(*a.grid == *b.grid)) throw std::invalid_argument("density matrices live on different grids");
  const Eigen::MatrixXcd diff = (a.rho - b.rho) * a.grid->dx();
  const Eigen::MatrixXcd herm = 0.5 * (diff + diff.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace qtraj
