#include "qtraj/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>
#include <utility>

namespace qtraj {

namespace {

// FFTW planning is not thread safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::span<cplx> data) { return reinterpret_cast<fftw_complex*>(data.data()); }

}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  std::lock_guard lock(planner_mutex());
  auto* scratch = fftw_alloc_complex(n);
  const int len = static_cast<int>(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  forward_plan_ = fftw_plan_dft_1d(len, scratch, scratch, FFTW_FORWARD, flags);
  backward_plan_ = fftw_plan_dft_1d(len, scratch, scratch, FFTW_BACKWARD, flags);
  fftw_free(scratch);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) {
    release();
    throw std::runtime_error("FFTW planning failed");
  }
}

Fft::~Fft() { release(); }

Fft::Fft(Fft&& other) noexcept
    : n_(other.n_),
      forward_plan_(std::exchange(other.forward_plan_, nullptr)),
      backward_plan_(std::exchange(other.backward_plan_, nullptr)) {}

Fft& Fft::operator=(Fft&& other) noexcept {
  if (this != &other) {
    release();
    n_ = other.n_;
    forward_plan_ = std::exchange(other.forward_plan_, nullptr);
    backward_plan_ = std::exchange(other.backward_plan_, nullptr);
  }
  return *this;
}

void Fft::release() {
  if (forward_plan_ == nullptr && backward_plan_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  if (forward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (backward_plan_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
  forward_plan_ = nullptr;
  backward_plan_ = nullptr;
}

void Fft::forward(std::span<cplx> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), as_fftw(data), as_fftw(data));
}

void Fft::backward_unscaled(std::span<cplx> data) const {
  if (data.size() != n_) throw std::invalid_argument("FFT buffer length mismatch");
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), as_fftw(data), as_fftw(data));
}

void Fft::inverse(std::span<cplx> data) const {
  backward_unscaled(data);
  const double scale = 1.0 / static_cast<double>(n_);
  for (auto& v : data) v *= scale;
}

}  // namespace qtraj
