#include "qtraj/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtraj/params.hpp"

namespace qtraj {

Grid::Grid(std::size_t n, double kbar) : n_(n), kbar_(kbar), dx_(kTwoPi / static_cast<double>(n)) {
  if (n < 4 || !std::has_single_bit(n)) throw std::invalid_argument("grid size must be a power of two >= 4");
  if (!(kbar > 0.0)) throw std::invalid_argument("kbar must be positive");
  x_.resize(n);
  p_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    x_[j] = -std::numbers::pi + static_cast<double>(j) * dx_;
    p_[j] = kbar * static_cast<double>(momentum_index(j));
  }
}

long Grid::momentum_index(std::size_t k) const {
  const auto half = static_cast<long>(n_ / 2);
  const auto kk = static_cast<long>(k);
  return kk < half ? kk : kk - static_cast<long>(n_);
}

double wrap_to_period(double x) {
  double r = std::fmod(x + std::numbers::pi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= std::numbers::pi;
  return r >= std::numbers::pi ? r - kTwoPi : r;
}

}  // namespace qtraj
