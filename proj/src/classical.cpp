#include "qtraj/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "qtraj/grid.hpp"

namespace qtraj {

namespace {

// Yoshida triple-jump weights.
const double kCbrt2 = std::cbrt(2.0);
const double kOuter = 1.0 / (2.0 - kCbrt2);
const double kInner = -kCbrt2 / (2.0 - kCbrt2);

void leapfrog(ClassicalState& s, double h, const SimParams& params) {
  s.p -= 0.5 * h * params.xi_at(s.time) * std::sin(s.x);
  s.x += h * s.p;
  s.time += h;
  s.p -= 0.5 * h * params.xi_at(s.time) * std::sin(s.x);
}

}  // namespace

double ClassicalState::wrapped_x() const { return wrap_to_period(x); }

void symplectic_step(ClassicalState& s, double dt, const SimParams& params) {
  const double t_end = s.time + dt;
  leapfrog(s, kOuter * dt, params);
  leapfrog(s, kInner * dt, params);
  leapfrog(s, kOuter * dt, params);
  s.time = t_end;
}

void stochastic_kick(ClassicalState& s, const WienerStep& w, const SimParams& params) {
  const double D_t = params.D_at(s.time);
  if (D_t == 0.0) return;
  s.p += std::sqrt(2.0 * D_t) * params.kbar * std::sin(s.x) * w.dW;
}

void sde_step(ClassicalState& s, const WienerStep& w, const SimParams& params) {
  stochastic_kick(s, w, params);
  symplectic_step(s, w.dt, params);
}

std::vector<StrobePoint> stroboscopic_portrait(std::span<const PhaseSpacePoint> seeds, int n_periods,
                                               const SimParams& params) {
  std::vector<StrobePoint> out;
  out.reserve(seeds.size() * static_cast<std::size_t>(n_periods + 1));
  const double dt = params.dt();
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    ClassicalState s{seeds[i].x, seeds[i].p, 0.0};
    out.push_back({0, i, s.wrapped_x(), s.p});
    for (int k = 1; k <= n_periods; ++k) {
      for (int step = 0; step < params.steps_per_period; ++step) symplectic_step(s, dt, params);
      s.time = kTwoPi * k;
      out.push_back({static_cast<std::size_t>(k), i, s.wrapped_x(), s.p});
    }
  }
  return out;
}

QInitParams QInitParams::from_quantum(double x0, double p0, double sigma_x, double sigma_p, double kbar, double xi) {
  if (!(sigma_x > 0.0) || !(xi > 0.0) || !(kbar > 0.0) || sigma_p < 0.0) {
    throw std::invalid_argument("invalid quantum parameters for the Q-function widths");
  }
  QInitParams q;
  q.x0 = x0;
  q.p0 = p0;
  q.delta_x = kbar * kbar / (2.0 * xi) + kbar * kbar / (4.0 * sigma_x);
  q.delta_p = kbar * std::sqrt(xi) / 2.0 + sigma_p;
  return q;
}

std::vector<ClassicalState> sample_q_initial(const QInitParams& q, std::size_t n, NoiseStream& stream) {
  if (n == 0) throw std::invalid_argument("need at least one sample");
  if (!(q.delta_x > 0.0) || !(q.delta_p > 0.0)) throw std::invalid_argument("Q-function variances must be positive");
  std::vector<ClassicalState> out(n);
  const double sx = std::sqrt(q.delta_x);
  const double sp = std::sqrt(q.delta_p);
  for (auto& s : out) {
    s.x = q.x0 + sx * stream.normal();
    s.p = q.p0 + sp * stream.normal();
    s.time = 0.0;
  }
  return out;
}

OrbitClassification classify_orbit(double x0, double p0, const SimParams& params, const ChaosCriteria& criteria) {
  const double d0 = criteria.initial_offset;
  const double dt = params.dt();
  ClassicalState a{x0, p0, 0.0};
  ClassicalState b{x0 + d0 / std::sqrt(2.0), p0 + d0 / std::sqrt(2.0), 0.0};
  double log_growth = 0.0;
  for (int k = 1; k <= criteria.periods; ++k) {
    for (int step = 0; step < params.steps_per_period; ++step) {
      symplectic_step(a, dt, params);
      symplectic_step(b, dt, params);
    }
    a.time = b.time = kTwoPi * k;
    const double ddx = b.x - a.x;
    const double ddp = b.p - a.p;
    const double d = std::hypot(ddx, ddp);
    log_growth += std::log(d / d0);
    b.x = a.x + ddx * d0 / d;
    b.p = a.p + ddp * d0 / d;
  }
  OrbitClassification out;
  out.exponent = log_growth / criteria.periods;
  out.kind = out.exponent > criteria.threshold ? OrbitKind::chaotic : OrbitKind::regular;
  return out;
}

}  // namespace qtraj
