#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace transference::detail {

/// Exact-length complex DFT of size N backed by FFTW (any N, no padding).
/// Forward uses e(-xt/N); neither direction normalizes.
class Dft {
 public:
  explicit Dft(std::size_t size);
  ~Dft();
  Dft(const Dft&) = delete;
  Dft& operator=(const Dft&) = delete;

  std::size_t size() const noexcept { return size_; }
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const;
  void backward(std::span<const std::complex<double>> in,
                std::span<std::complex<double>> out) const;

 private:
  std::size_t size_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace transference::detail
