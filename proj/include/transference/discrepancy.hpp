#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "transference/residue.hpp"
#include "transference/rng.hpp"
#include "transference/weightfn.hpp"

namespace transference {

/// Product test u_1, ..., u_r : G^{r-1} -> [0, 1].
///
/// u_i takes y with its i-th coordinate removed; arrays are row-major over the
/// remaining r - 1 coordinates in increasing slot order, so entry
/// sum_s z_s N^{r-2-s} holds u_i(z_0, ..., z_{r-2}).
class TestFamily {
 public:
  /// Throws PreconditionError on r < 2, wrong array sizes, or entries outside
  /// [0, 1].
  TestFamily(std::size_t arity, std::uint64_t modulus,
             std::vector<std::vector<double>> functions);

  static TestFamily constant(std::size_t arity, std::uint64_t modulus,
                             double value);
  /// Entries uniform in [0, 1], or uniform in {0, 1} when `binary`.
  static TestFamily random(std::size_t arity, std::uint64_t modulus,
                           Stream& stream, bool binary = false);

  std::size_t arity() const noexcept { return functions_.size(); }
  std::uint64_t modulus() const noexcept { return modulus_; }
  /// N^{r-1}.
  std::size_t face_size() const noexcept { return face_size_; }
  std::span<const double> operator[](std::size_t i) const noexcept {
    return functions_[i];
  }
  const std::vector<std::vector<double>>& functions() const noexcept {
    return functions_;
  }

  /// Array offset of y with slot `omit` removed.
  std::size_t face_index(std::span<const Residue> y, std::size_t omit) const noexcept;

  friend bool operator==(const TestFamily&, const TestFamily&) = default;

 private:
  std::uint64_t modulus_;
  std::size_t face_size_;
  std::vector<std::vector<double>> functions_;
};

/// (u)*_psi(x) = E[prod_i u_i(y_{[r]\{i}}) | psi(y) = x], by walking the
/// N^{r-1} points of the fiber.
double generalized_convolution(const TestFamily& u, const LinearForm& form,
                               Residue x);

/// (u)*_psi at every x of Z_N.
std::vector<double> convolution_table(const TestFamily& u, const LinearForm& form);

/// E_{x in G^r}[(g - h)(psi(x)) prod_i u_i(x_{[r]\{i}})] without the absolute
/// value, computed as <g - h, (u)*_psi>.
double discrepancy_signed(const WeightFn& g, const WeightFn& h,
                          const LinearForm& form, const TestFamily& u);

/// |discrepancy_signed|.
double discrepancy_value(const WeightFn& g, const WeightFn& h,
                         const LinearForm& form, const TestFamily& u);

enum class DiscrepancyMode { fixed, searched, bounded };

std::string_view to_string(DiscrepancyMode mode) noexcept;

struct DiscrepancyReport {
  double value = 0.0;
  double signed_value = 0.0;
  double epsilon_target = 0.0;
  int form_index = 1;
  DiscrepancyMode mode = DiscrepancyMode::searched;
  std::optional<TestFamily> witness;
  std::uint64_t restarts = 0;
  std::uint64_t seed = 0;
  std::size_t best_restart = 0;
  /// Signed objective after each coordinate update of the winning ascent.
  std::vector<double> ascent_trace;
};

struct SearchOptions {
  std::uint64_t restarts = 8;
  std::uint64_t seed = 0;
  double epsilon_target = 0.0;
  std::size_t max_sweeps = 200;
};

/// Coordinate ascent over the vertices of [0,1]^{N^{r-1}} for each u_i in
/// turn, for both signs, best over the seeded restarts. The value is a lower
/// bound on the true maximum and is recomputed from the returned witness.
DiscrepancyReport discrepancy_search(const WeightFn& g, const WeightFn& h,
                                     const LinearForm& form,
                                     const SearchOptions& options);

inline DiscrepancyReport discrepancy_search(const WeightFn& g, const WeightFn& h,
                                            const LinearForm& form,
                                            std::uint64_t restarts,
                                            std::uint64_t seed) {
  return discrepancy_search(g, h, form, SearchOptions{restarts, seed});
}

enum class BoundMode { exact, monte_carlo };

std::string_view to_string(BoundMode mode) noexcept;

struct BoxNormBound {
  /// max(raw, 0)^(1/2^r).
  double value = 0.0;
  /// The 2^r-fold average before clamping and taking the root.
  double raw = 0.0;
  double standard_error = 0.0;
  BoundMode mode = BoundMode::exact;
  std::uint64_t samples = 0;
  int form_index = 1;
};

inline constexpr double kDefaultBoundBudget = 1e9;

/// E[prod_{omega in {0,1}^r} (nu(psi(x^(omega))) - 1)]^(1/2^r). Exact with
/// O(N^r) work while N^r <= budget, otherwise a seeded Monte Carlo estimate.
BoxNormBound box_norm_bound(const WeightFn& nu, const LinearForm& form,
                            double budget = kDefaultBoundBudget,
                            std::uint64_t samples = 1000000,
                            std::uint64_t seed = 0);

/// Re-parametrizes u by the slotwise units of scaling_map(from_j, to_j) so the
/// discrepancy under psi_{to_j} equals the one under psi_{from_j}.
TestFamily transport_witness(const TestFamily& u, int from_j, int to_j,
                             const Group& group);

/// Both sides of (u)*(x) (u')*(x) = E_z[(v_z)*(x) | psi(z) = 0] with
/// v_{i,z}(y) = u_i(y) u'_i(y + z_{[r]\{i}}). The fiber of z is enumerated
/// when it has at most kClosureEnumerationLimit points, otherwise that many
/// seeded samples of it are averaged.
std::pair<double, double> product_closure_witness(const TestFamily& u,
                                                  const TestFamily& u_prime,
                                                  const LinearForm& form,
                                                  Residue x, std::uint64_t seed);

inline constexpr std::size_t kClosureEnumerationLimit = 4096;

}  // namespace transference
