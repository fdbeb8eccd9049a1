#pragma once

#include <cstdint>
#include <string_view>

#include "transference/weightfn.hpp"

namespace transference {

enum class ApMethod { direct, fourier };

std::string_view to_string(ApMethod method) noexcept;
ApMethod parse_ap_method(std::string_view text);

/// Lambda_k(f) = E[f(x) f(x+d) ... f(x+(k-1)d) | x, d in Z_N].
struct ApDensity {
  double value = 0.0;
  int k = 3;
  std::uint64_t modulus = 0;
  ApMethod method = ApMethod::direct;
};

/// Exact O(k N^2) sum over all (x, d), degenerate d = 0 included.
ApDensity ap_density_direct(const WeightFn& f, int k);

/// k = 3 only: sum_t fhat(t)^2 fhat(-2t) with fhat(t) = E_x f(x) e(-xt/N).
/// Needs N odd, which the Group guarantees for k = 3. Throws WrongK.
ApDensity ap3_density_fourier(const WeightFn& f, int k = 3);

ApDensity ap_density(const WeightFn& f, int k, ApMethod method);

/// |Lambda_k(f) - Lambda_k(g)| by the direct method.
double ap_gap(const WeightFn& f, const WeightFn& g, int k);

}  // namespace transference
