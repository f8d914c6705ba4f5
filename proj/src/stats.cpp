#include "qtraj/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <numeric>
#include <iterator>
#include <random>
#include <ranges>
#include <stdexcept>
#include <thread>

namespace qtraj {

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double angle(const WaveFunction& a, const WaveFunction& b) {
  const double overlap = std::abs(inner_product(a, b));
  return std::acos(std::clamp(overlap, 0.0, 1.0));
}

std::size_t AngleMatrix::pair_index(std::size_t i, std::size_t j, std::size_t n) {
  // rows 0..i-1 hold (n-1) + (n-2) + ... + (n-i) entries
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

double AngleMatrix::operator()(std::size_t i, std::size_t j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  return packed_[pair_index(i, j, n_)];
}

void AngleMatrix::set(std::size_t i, std::size_t j, double theta) {
  if (i == j) throw std::invalid_argument("diagonal angles are fixed at zero");
  if (i > j) std::swap(i, j);
  packed_[pair_index(i, j, n_)] = theta;
}

AngleMatrix angle_matrix(std::span<const WaveFunction> states, int workers) {
  const std::size_t n = states.size();
  if (n < 2) throw std::invalid_argument("need at least two states");
  for (const auto& s : states) {
    if (!(*s.grid == *states[0].grid)) throw std::invalid_argument("states live on different grids");
  }
  AngleMatrix m(n);
  std::atomic<std::size_t> next_row{0};
  const auto work = [&] {
    for (std::size_t i = next_row++; i < n; i = next_row++) {
      for (std::size_t j = i + 1; j < n; ++j) m.set(i, j, angle(states[i], states[j]));
    }
  };
  const int nthreads = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (nthreads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(work);
  }
  return m;
}

namespace {

AngleAverage summarize(std::span<const double> thetas) {
  AngleAverage out;
  out.n_pairs = thetas.size();
  if (thetas.empty()) return out;
  const double count = static_cast<double>(thetas.size());
  out.mean = pairwise_sum(thetas) / count;
  std::vector<double> sq(thetas.size());
  std::transform(thetas.begin(), thetas.end(), sq.begin(), [&](double v) { return (v - out.mean) * (v - out.mean); });
  const double var = thetas.size() > 1 ? pairwise_sum(sq) / (count - 1.0) : 0.0;
  out.std_error = std::sqrt(var / count);
  return out;
}

}  // namespace

AngleAverage average_angle(const AngleMatrix& angles) { return summarize(angles.pairs()); }

AngleAverage average_angle(std::span<const WaveFunction> states, std::optional<std::size_t> pair_budget,
                           std::uint64_t sample_seed, int workers) {
  const std::size_t n = states.size();
  if (n < 2) throw std::invalid_argument("need at least two states");
  const std::size_t total = n * (n - 1) / 2;
  if (!pair_budget || *pair_budget >= total) return average_angle(angle_matrix(states, workers));
  if (*pair_budget == 0) throw std::invalid_argument("pair budget must be positive");

  std::vector<std::size_t> chosen(*pair_budget);
  std::mt19937_64 rng(sample_seed);
  const auto end = std::ranges::sample(std::views::iota(std::size_t{0}, total), chosen.begin(),
                                       static_cast<std::ptrdiff_t>(*pair_budget), rng);
  chosen.erase(end, chosen.end());
  std::ranges::sort(chosen);
  std::vector<double> thetas(chosen.size());
  std::size_t i = 0;
  std::size_t row_start = 0;
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    // chosen is sorted; walk rows forward
    while (chosen[c] >= row_start + (n - i - 1)) {
      row_start += n - i - 1;
      ++i;
    }
    const std::size_t j = i + 1 + (chosen[c] - row_start);
    thetas[c] = angle(states[i], states[j]);
  }
  AngleAverage out = summarize(thetas);
  // sampling without replacement from a finite population
  out.std_error *= std::sqrt(1.0 - static_cast<double>(chosen.size()) / static_cast<double>(total));
  return out;
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

std::size_t Histogram::mode_bin() const {
  return static_cast<std::size_t>(std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));
}

Histogram angle_histogram(std::span<const double> angles, std::size_t n_bins) {
  if (n_bins == 0) throw std::invalid_argument("need at least one bin");
  Histogram h{0.0, std::numbers::pi / 2.0, std::vector<std::size_t>(n_bins, 0)};
  const double scale = static_cast<double>(n_bins) / h.hi;
  for (double theta : angles) {
    const auto b = static_cast<std::size_t>(std::clamp(theta * scale, 0.0, static_cast<double>(n_bins - 1)));
    ++h.counts[std::min(b, n_bins - 1)];
  }
  return h;
}

Histogram angle_histogram(const AngleMatrix& angles, std::size_t n_bins) {
  if (angles.size() < 2) throw std::invalid_argument("need at least two states");
  return angle_histogram(angles.pairs(), n_bins);
}

MomentRow sample_moments(std::span<const double> samples) {
  if (samples.empty()) throw std::invalid_argument("need at least one sample");
  const double count = static_cast<double>(samples.size());
  MomentRow row;
  row.mean_p = pairwise_sum(samples) / count;
  std::vector<double> sq(samples.size());
  std::transform(samples.begin(), samples.end(), sq.begin(),
                 [&](double v) { return (v - row.mean_p) * (v - row.mean_p); });
  row.var_of_means = pairwise_sum(sq) / count;
  row.pooled_var = row.var_of_means;
  row.stderr_mean = std::sqrt(row.var_of_means / count);
  return row;
}

std::vector<MomentRow> ensemble_moments(const std::vector<std::vector<ConditionalMoments>>& series) {
  if (series.empty()) throw std::invalid_argument("need at least one trajectory");
  const std::size_t n_strobes = series.front().size();
  for (const auto& s : series) {
    if (s.size() != n_strobes) throw std::invalid_argument("trajectories have different lengths");
  }
  std::vector<MomentRow> rows(n_strobes);
  std::vector<double> means(series.size());
  std::vector<double> cond_vars(series.size());
  for (std::size_t k = 0; k < n_strobes; ++k) {
    for (std::size_t i = 0; i < series.size(); ++i) {
      means[i] = series[i][k].mean_p;
      cond_vars[i] = series[i][k].mean_p2 - means[i] * means[i];
    }
    MomentRow row = sample_moments(means);
    row.mean_cond_var = pairwise_sum(cond_vars) / static_cast<double>(series.size());
    row.pooled_var = row.var_of_means + row.mean_cond_var;
    rows[k] = row;
  }
  return rows;
}

}  // namespace qtraj
