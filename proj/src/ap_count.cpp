#include "transference/ap_count.hpp"

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "dft.hpp"
#include "transference/errors.hpp"
#include "transference/parallel.hpp"

namespace transference {

std::string_view to_string(ApMethod method) noexcept {
  return method == ApMethod::direct ? "direct" : "fourier";
}

ApMethod parse_ap_method(std::string_view text) {
  if (text == "direct") return ApMethod::direct;
  if (text == "fourier") return ApMethod::fourier;
  throw PreconditionError("unknown counting method '" + std::string(text) + "'");
}

ApDensity ap_density_direct(const WeightFn& f, int k) {
  if (k < 1) throw PreconditionError("progression length must be positive");
  const std::uint64_t n = f.group().modulus();
  const std::span<const double> values = f.values();
  std::vector<long double> partial(n, 0.0L);
  parallel_for(n, [&](std::size_t x) {
    if (values[x] == 0.0) return;
    long double acc = 0.0L;
    for (std::uint64_t d = 0; d < n; ++d) {
      double product = values[x];
      std::uint64_t position = x;
      for (int i = 1; i < k && product != 0.0; ++i) {
        position += d;
        if (position >= n) position -= n;
        product *= values[position];
      }
      acc += product;
    }
    partial[x] = acc;
  });
  long double total = 0.0L;
  for (long double p : partial) total += p;
  const auto nn = static_cast<long double>(n);
  return {static_cast<double>(total / (nn * nn)), k, n, ApMethod::direct};
}

ApDensity ap3_density_fourier(const WeightFn& f, int k) {
  if (k != 3) throw WrongK(k);
  const std::uint64_t n = f.group().modulus();
  if (n % 2 == 0) throw PreconditionError("Fourier counting needs N odd");
  std::vector<std::complex<double>> in(n), hat(n);
  for (std::uint64_t x = 0; x < n; ++x) in[x] = f[x];
  detail::Dft dft(n);
  dft.forward(in, hat);
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : hat) c *= scale;
  std::complex<double> total = 0.0;
  for (std::uint64_t t = 0; t < n; ++t) {
    const std::uint64_t minus_two_t = (2 * (n - t)) % n;
    total += hat[t] * hat[t] * hat[minus_two_t];
  }
  return {total.real(), 3, n, ApMethod::fourier};
}

ApDensity ap_density(const WeightFn& f, int k, ApMethod method) {
  return method == ApMethod::direct ? ap_density_direct(f, k)
                                    : ap3_density_fourier(f, k);
}

double ap_gap(const WeightFn& f, const WeightFn& g, int k) {
  if (f.size() != g.size()) throw PreconditionError("ap_gap needs functions on the same group");
  return std::abs(ap_density_direct(f, k).value - ap_density_direct(g, k).value);
}

}  // namespace transference
