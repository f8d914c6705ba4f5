#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qtraj/wavefunction.hpp"

namespace qtraj {

/// Summation by recursive halving; the result depends only on the input order.
double pairwise_sum(std::span<const double> values);

/// Hilbert-space angle arccos |<a|b>| in [0, pi/2].
double angle(const WaveFunction& a, const WaveFunction& b);

/// Symmetric matrix of pairwise angles, stored as the strict upper triangle.
class AngleMatrix {
 public:
  AngleMatrix() = default;
  explicit AngleMatrix(std::size_t n) : n_(n), packed_(n * (n - 1) / 2, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, double theta);
  /// Angles of all unordered pairs (i < j) in row-major order.
  std::span<const double> pairs() const { return packed_; }

  static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

 private:
  std::size_t n_ = 0;
  std::vector<double> packed_;
};

/// Fills every pair angle, splitting rows across `workers` threads. Entries are
/// computed independently, so the result does not depend on the worker count.
AngleMatrix angle_matrix(std::span<const WaveFunction> states, int workers = 1);

struct AngleAverage {
  double mean = 0.0;
  double std_error = 0.0;  // standard error of the mean over the pairs used
  std::size_t n_pairs = 0;
};

/// Mean angle over all unordered pairs, or over a seeded uniform subsample of
/// `pair_budget` distinct pairs when that is smaller than N(N-1)/2.
AngleAverage average_angle(std::span<const WaveFunction> states, std::optional<std::size_t> pair_budget = {},
                           std::uint64_t sample_seed = 0, int workers = 1);
AngleAverage average_angle(const AngleMatrix& angles);

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> counts;

  double bin_width() const { return (hi - lo) / static_cast<double>(counts.size()); }
  double bin_lo(std::size_t b) const { return lo + bin_width() * static_cast<double>(b); }
  double bin_hi(std::size_t b) const { return lo + bin_width() * static_cast<double>(b + 1); }
  double bin_center(std::size_t b) const { return lo + bin_width() * (static_cast<double>(b) + 0.5); }
  std::size_t total() const;
  std::size_t mode_bin() const;  // first bin with the largest count
};

/// Uniform bins over [0, pi/2]; the top edge belongs to the last bin.
Histogram angle_histogram(std::span<const double> angles, std::size_t n_bins = 50);
Histogram angle_histogram(const AngleMatrix& angles, std::size_t n_bins = 50);

/// Per-trajectory conditional moments at one strobe.
struct ConditionalMoments {
  double mean_p = 0.0;
  double mean_p2 = 0.0;
};

struct MomentRow {
  double mean_p = 0.0;         // ensemble mean of <p>_c
  double var_of_means = 0.0;   // variance over trajectories of <p>_c
  double mean_cond_var = 0.0;  // ensemble mean of <p^2>_c - <p>_c^2
  double pooled_var = 0.0;     // var_of_means + mean_cond_var
  double stderr_mean = 0.0;    // sqrt(var_of_means / N)
};

/// series[traj][strobe] -> one row per strobe. All trajectories must have equal length.
std::vector<MomentRow> ensemble_moments(const std::vector<std::vector<ConditionalMoments>>& series);
/// Moments of point samples (classical ensembles: conditional variance is zero).
MomentRow sample_moments(std::span<const double> samples);

}  // namespace qtraj
