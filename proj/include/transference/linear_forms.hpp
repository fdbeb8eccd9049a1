#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transference/residue.hpp"
#include "transference/weightfn.hpp"

namespace transference {

/// Choice of exponents n_{j,omega} in {0, 1}, one per factor of the linear
/// forms average: j in [k] and omega in {0,1}^{[k]\{j}}.
///
/// Bit order (also the serialized order): factor (j, omega) sits at
/// (j - 1) * 2^(k-1) + sum_t omega_t 2^t, where t enumerates [k]\{j} by
/// increasing index.
class ExponentPattern {
 public:
  static ExponentPattern all_ones(int ap_length);
  static ExponentPattern all_zeros(int ap_length);
  /// Bits from the binary expansion of `index`, least significant bit first.
  /// Only valid while k * 2^(k-1) <= 64.
  static ExponentPattern from_index(int ap_length, std::uint64_t index);
  /// Inverse of to_string(): one '0' or '1' per factor.
  static ExponentPattern parse(int ap_length, std::string_view bits);

  int ap_length() const noexcept { return ap_length_; }
  std::size_t size() const noexcept { return bits_.size(); }
  bool bit(std::size_t index) const noexcept { return bits_[index] != 0; }
  bool bit(int j, std::uint64_t omega) const noexcept {
    return bits_[factor_index(j, omega)] != 0;
  }
  void set(std::size_t index, bool value) noexcept { bits_[index] = value ? 1 : 0; }
  std::size_t factor_index(int j, std::uint64_t omega) const noexcept {
    return static_cast<std::size_t>(j - 1) * (std::size_t{1} << (ap_length_ - 1)) +
           omega;
  }
  std::size_t popcount() const noexcept;
  std::string to_string() const;

  friend bool operator==(const ExponentPattern&, const ExponentPattern&) = default;

 private:
  explicit ExponentPattern(int ap_length);

  int ap_length_;
  std::vector<std::uint8_t> bits_;
};

/// k * 2^(k-1).
std::size_t lfc_factor_count(const Group& group);

/// Product over the selected factors of nu(sum_i (i - j) x_i^(omega_i)) at
/// one point (x^(0), x^(1)) of Z_N^k x Z_N^k. Erased factors are skipped.
double lfc_term(const WeightFn& nu, const ExponentPattern& pattern,
                std::span<const Residue> x0, std::span<const Residue> x1);

enum class LfcMode { exact, monte_carlo };

std::string_view to_string(LfcMode mode) noexcept;

struct LfcReport {
  ExponentPattern pattern;
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t sample_count = 0;
  LfcMode mode = LfcMode::exact;
  std::uint64_t seed = 0;

  double deviation() const noexcept;
};

inline constexpr double kDefaultExactBudget = 1e9;

/// Number of term evaluations lfc_exact performs: 2 N^(k+1).
double lfc_exact_cost(const Group& group) noexcept;

/// Exact average over all of Z_N^{2k}. Throws BudgetExceeded when
/// lfc_exact_cost exceeds `budget`.
LfcReport lfc_exact(const WeightFn& nu, const ExponentPattern& pattern,
                    double budget = kDefaultExactBudget);

/// Samples are drawn in fixed-size chunks, chunk c from Stream(seed, c), and
/// reduced in chunk order, so the result does not depend on the worker count.
LfcReport lfc_monte_carlo(const WeightFn& nu, const ExponentPattern& pattern,
                          std::uint64_t samples, std::uint64_t seed);

inline constexpr std::uint64_t kLfcChunkSize = 1 << 14;

struct LfcSweep {
  std::vector<LfcReport> reports;
  double worst_deviation = 0.0;
  std::size_t worst_index = 0;
  double max_standard_error = 0.0;
};

/// Evaluates the all-ones pattern plus pattern_budget - 1 further patterns
/// drawn without replacement, or every pattern when there are at most
/// pattern_budget of them.
LfcSweep lfc_sweep(const WeightFn& nu, std::size_t pattern_budget,
                   std::uint64_t samples, std::uint64_t seed,
                   LfcMode mode = LfcMode::monte_carlo,
                   double budget = kDefaultExactBudget);

}  // namespace transference
