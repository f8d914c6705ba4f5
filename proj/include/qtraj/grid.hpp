#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace qtraj {

/// Periodic position grid on [-pi, pi) and its conjugate momentum grid.
///
/// Momenta are stored in FFT ordering: p[k] = kbar * k for k < n/2 and
/// kbar * (k - n) otherwise, so the momentum spacing is exactly kbar.
class Grid {
 public:
  Grid(std::size_t n, double kbar);

  std::size_t size() const { return n_; }
  double kbar() const { return kbar_; }
  double dx() const { return dx_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& p() const { return p_; }

  /// Integer momentum index (in units of kbar) of FFT bin k.
  long momentum_index(std::size_t k) const;

  bool operator==(const Grid& other) const { return n_ == other.n_ && kbar_ == other.kbar_; }

 private:
  std::size_t n_;
  double kbar_;
  double dx_;
  std::vector<double> x_;
  std::vector<double> p_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(std::size_t n, double kbar) { return std::make_shared<const Grid>(n, kbar); }

/// Wraps an angle-like coordinate into [-pi, pi).
double wrap_to_period(double x);

}  // namespace qtraj
