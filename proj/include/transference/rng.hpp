#pragma once

#include <cstdint>
#include <random>

namespace transference {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of substream `stream_id` under `seed`. Distinct ids give unrelated
/// streams, so chunks of parallel work can draw independently and still
/// reproduce exactly.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::uint64_t stream_id) noexcept {
  return mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019ULL));
}

/// Deterministic random stream identified by (seed, stream_id).
///
/// Only the raw 64-bit engine output is used; the conversions below are
/// written out so draws do not depend on the standard library's
/// distribution implementations.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : engine_(derive_seed(seed, stream_id)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), n >= 1 (Lemire's rejection method).
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace transference
