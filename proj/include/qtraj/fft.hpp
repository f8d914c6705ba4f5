#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace qtraj {

using cplx = std::complex<double>;

/// In-place complex DFT of fixed length backed by FFTW.
///
/// forward: X_k = sum_j x_j exp(-2 pi i jk/n); inverse applies exp(+2 pi i jk/n)
/// and divides by n. Plans are created with FFTW_UNALIGNED so any buffer of the
/// right length may be passed, and results do not depend on buffer alignment.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;
  Fft(Fft&& other) noexcept;
  Fft& operator=(Fft&& other) noexcept;

  std::size_t size() const { return n_; }
  void forward(std::span<cplx> data) const;
  void inverse(std::span<cplx> data) const;
  /// inverse without the 1/n factor
  void backward_unscaled(std::span<cplx> data) const;

 private:
  void release();

  std::size_t n_ = 0;
  void* forward_plan_ = nullptr;
  void* backward_plan_ = nullptr;
};

}  // namespace qtraj
