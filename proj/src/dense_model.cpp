#include "transference/dense_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "transference/rng.hpp"

namespace transference {

NoConvergence::NoConvergence(DenseModelResult result)
    : StageError("dense model did not converge after " +
                 std::to_string(result.iterations) + " iterations (gap " +
                 std::to_string(result.final_gap) + ")"),
      result_(std::move(result)) {}

namespace {

constexpr double kMassTolerance = 1e-12;

double clipped_mean(std::span<const double> lambda, double shift) {
  long double sum = 0.0L;
  for (double v : lambda) sum += std::clamp(v + shift, 0.0, 1.0);
  return static_cast<double>(sum / static_cast<long double>(lambda.size()));
}

}  // namespace

std::vector<double> project_to_unit_box(std::span<const double> lambda,
                                        double target) {
  const std::size_t n = lambda.size();
  std::vector<double> out(n);
  if (n == 0) return out;
  if (target <= 0.0) return out;
  if (target >= 1.0) {
    std::fill(out.begin(), out.end(), 1.0);
    return out;
  }

  double shift = 0.0;
  if (std::abs(clipped_mean(lambda, 0.0) - target) > kMassTolerance / 4) {
    const auto [lo_it, hi_it] = std::minmax_element(lambda.begin(), lambda.end());
    // Mean is 0 at lo and 1 at hi, and nondecreasing in between.
    double lo = -*hi_it;
    double hi = 1.0 - *lo_it;
    for (int step = 0; step < 200; ++step) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (clipped_mean(lambda, mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    shift = std::abs(clipped_mean(lambda, lo) - target) <
                    std::abs(clipped_mean(lambda, hi) - target)
                ? lo
                : hi;
    // One Newton step inside the final linear piece removes the rounding
    // left by the bracket.
    std::size_t interior = 0;
    for (double v : lambda) {
      if (v + shift > 0.0 && v + shift < 1.0) ++interior;
    }
    if (interior > 0) {
      const double slope = static_cast<double>(interior) / static_cast<double>(n);
      const double refined = shift + (target - clipped_mean(lambda, shift)) / slope;
      if (std::abs(clipped_mean(lambda, refined) - target) <
          std::abs(clipped_mean(lambda, shift) - target)) {
        shift = refined;
      }
    }
  }
  for (std::size_t x = 0; x < n; ++x) out[x] = std::clamp(lambda[x] + shift, 0.0, 1.0);
  return out;
}

DenseModelResult extract_dense_model(const WeightFn& f, const WeightFn& nu,
                                     const LinearForm& form,
                                     const DenseModelOptions& options) {
  const Group& group = f.group();
  if (nu.size() != f.size() || form.modulus() != f.size()) {
    throw PreconditionError("f, nu and the form live on different groups");
  }
  for (std::size_t x = 0; x < f.size(); ++x) {
    if (f[x] > nu[x]) {
      throw NotDominated("f(" + std::to_string(x) + ") = " + std::to_string(f[x]) +
                         " exceeds nu(x) = " + std::to_string(nu[x]));
    }
  }
  if (!(options.epsilon > 0.0)) throw PreconditionError("epsilon must be positive");
  const double target = mean(f);
  if (target > 1.0 + kMassTolerance) {
    throw PreconditionError("mean(f) > 1; rescale f to unit mass first");
  }

  const double step = options.epsilon / 2.0;
  std::vector<double> lambda(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) lambda[x] = std::min(f[x], 1.0);

  WeightFn model(group, project_to_unit_box(lambda, target), WeightTag::fmodel);
  DenseModelResult best{model};
  best.final_gap = std::numeric_limits<double>::infinity();
  std::vector<BoostingStep> log;

  std::size_t updates = 0;
  bool converged = false;
  for (;;) {
    SearchOptions search;
    search.restarts = options.restarts;
    search.seed = derive_seed(options.seed, updates);
    search.epsilon_target = options.epsilon;
    const DiscrepancyReport found = discrepancy_search(f, model, form, search);

    if (found.value < best.final_gap) {
      best.model = model;
      best.final_gap = found.value;
    }
    BoostingStep entry{updates, found.value, 0, 0.0};
    if (found.value <= options.epsilon) {
      log.push_back(entry);
      best.model = model;
      best.final_gap = found.value;
      converged = true;
      break;
    }
    if (updates >= options.max_iters) {
      log.push_back(entry);
      break;
    }
    entry.direction = found.signed_value > 0.0 ? 1 : -1;
    entry.step_size = step;
    log.push_back(entry);

    const std::vector<double> phi = convolution_table(*found.witness, form);
    for (std::size_t x = 0; x < lambda.size(); ++x) {
      lambda[x] += step * entry.direction * phi[x];
    }
    model = WeightFn(group, project_to_unit_box(lambda, target), WeightTag::fmodel);
    ++updates;
  }

  best.iterations = updates;
  best.epsilon_target = options.epsilon;
  best.converged = converged;
  best.mean_f = target;
  best.mean_model = mean(best.model);
  if (log.size() > 10) {
    best.window_regression =
        log.back().search_value > log[log.size() - 11].search_value;
  }
  best.log = std::move(log);
  if (!converged) throw NoConvergence(std::move(best));
  return best;
}

std::vector<DiscrepancyReport> verify_model(const WeightFn& f, const WeightFn& model,
                                            const Group& group, double epsilon,
                                            std::uint64_t restarts,
                                            std::uint64_t seed) {
  std::vector<DiscrepancyReport> reports;
  for (const LinearForm& form : all_forms(group)) {
    SearchOptions search;
    search.restarts = restarts;
    search.seed = derive_seed(seed, static_cast<std::uint64_t>(form.omitted_index()));
    search.epsilon_target = epsilon;
    reports.push_back(discrepancy_search(f, model, form, search));
  }
  return reports;
}

}  // namespace transference
