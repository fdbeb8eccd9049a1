#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "transference/discrepancy.hpp"
#include "transference/errors.hpp"
#include "transference/weightfn.hpp"

namespace transference {

struct BoostingStep {
  std::size_t iteration = 0;
  /// Best distinguisher value found against the current model.
  double search_value = 0.0;
  /// +1 when f outweighs the model on the distinguisher, -1 otherwise, 0 on
  /// the final (accepted) round.
  int direction = 0;
  double step_size = 0.0;
};

struct DenseModelResult {
  WeightFn model;
  /// Number of potential updates applied.
  std::size_t iterations = 0;
  double final_gap = 0.0;
  double epsilon_target = 0.0;
  bool converged = false;
  /// Set when the distinguisher value at exit exceeds the one 10 rounds
  /// earlier.
  bool window_regression = false;
  double mean_f = 0.0;
  double mean_model = 0.0;
  std::vector<BoostingStep> log;
};

/// Raised when the boosting loop hits max_iters; carries the best model seen.
class NoConvergence : public StageError {
 public:
  explicit NoConvergence(DenseModelResult result);
  const DenseModelResult& result() const noexcept { return result_; }

 private:
  DenseModelResult result_;
};

/// clip(lambda + s, 0, 1) with the shift s chosen by bisection so the mean
/// matches `target` to 1e-12. s = 0 is kept when it already matches.
std::vector<double> project_to_unit_box(std::span<const double> lambda,
                                        double target);

struct DenseModelOptions {
  double epsilon = 0.05;
  std::uint64_t restarts = 8;
  std::size_t max_iters = 500;
  std::uint64_t seed = 0;
};

/// Finds f~ : Z_N -> [0,1] with mean(f~) = mean(f) that no product test
/// found by discrepancy_search separates from f by more than epsilon.
///
/// Additive boosting: starting from lambda = min(f, 1), each round searches
/// for a distinguisher phi = (u)*_psi against the current model, and if its
/// value exceeds epsilon moves lambda by (epsilon / 2) * sign * phi and
/// re-projects. Requires 0 <= f <= nu and mean(f) <= 1.
///
/// Throws NotDominated, PreconditionError, or NoConvergence.
DenseModelResult extract_dense_model(const WeightFn& f, const WeightFn& nu,
                                     const LinearForm& form,
                                     const DenseModelOptions& options);

inline DenseModelResult extract_dense_model(const WeightFn& f, const WeightFn& nu,
                                            const LinearForm& form, double epsilon,
                                            std::uint64_t restarts,
                                            std::size_t max_iters,
                                            std::uint64_t seed) {
  return extract_dense_model(f, nu, form,
                             DenseModelOptions{epsilon, restarts, max_iters, seed});
}

/// Runs discrepancy_search for (f, model) under every psi_j, j = 1..k.
std::vector<DiscrepancyReport> verify_model(const WeightFn& f, const WeightFn& model,
                                            const Group& group, double epsilon,
                                            std::uint64_t restarts,
                                            std::uint64_t seed);

}  // namespace transference
