#include "dft.hpp"

#include <mutex>
#include <vector>

#include <fftw3.h>

namespace transference::detail {

namespace {
// Only fftw_execute* is thread safe; planning must be serialized.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dft::Dft(std::size_t size) : size_(size) {
  std::vector<std::complex<double>> scratch_in(size), scratch_out(size);
  auto* in = reinterpret_cast<fftw_complex*>(scratch_in.data());
  auto* out = reinterpret_cast<fftw_complex*>(scratch_out.data());
  const int n = static_cast<int>(size);
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_plan_ = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
}

Dft::~Dft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void Dft::forward(std::span<const std::complex<double>> in,
                  std::span<std::complex<double>> out) const {
  // FFTW does not write to the input of an out-of-place c2c transform.
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void Dft::backward(std::span<const std::complex<double>> in,
                   std::span<std::complex<double>> out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                   reinterpret_cast<fftw_complex*>(
                       const_cast<std::complex<double>*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace transference::detail
