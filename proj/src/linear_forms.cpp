#include "transference/linear_forms.hpp"

#include <cmath>
#include <set>

#include "moments.hpp"
#include "transference/errors.hpp"
#include "transference/parallel.hpp"
#include "transference/rng.hpp"

namespace transference {

ExponentPattern::ExponentPattern(int ap_length) : ap_length_(ap_length) {
  if (ap_length < 3 || ap_length > 12) {
    throw PreconditionError("exponent patterns need 3 <= k <= 12");
  }
  bits_.assign(static_cast<std::size_t>(ap_length) << (ap_length - 1), 0);
}

ExponentPattern ExponentPattern::all_ones(int ap_length) {
  ExponentPattern p(ap_length);
  for (auto& b : p.bits_) b = 1;
  return p;
}

ExponentPattern ExponentPattern::all_zeros(int ap_length) {
  return ExponentPattern(ap_length);
}

ExponentPattern ExponentPattern::from_index(int ap_length, std::uint64_t index) {
  ExponentPattern p(ap_length);
  if (p.bits_.size() > 64) {
    throw PreconditionError("pattern index only defined for k * 2^(k-1) <= 64");
  }
  for (std::size_t b = 0; b < p.bits_.size(); ++b) {
    p.bits_[b] = static_cast<std::uint8_t>((index >> b) & 1U);
  }
  return p;
}

ExponentPattern ExponentPattern::parse(int ap_length, std::string_view bits) {
  ExponentPattern p(ap_length);
  if (bits.size() != p.bits_.size()) throw ArityMismatch(p.bits_.size(), bits.size());
  for (std::size_t b = 0; b < bits.size(); ++b) {
    if (bits[b] != '0' && bits[b] != '1') {
      throw PreconditionError("pattern string must contain only 0 and 1");
    }
    p.bits_[b] = bits[b] == '1' ? 1 : 0;
  }
  return p;
}

std::size_t ExponentPattern::popcount() const noexcept {
  std::size_t count = 0;
  for (auto b : bits_) count += b;
  return count;
}

std::string ExponentPattern::to_string() const {
  std::string s(bits_.size(), '0');
  for (std::size_t b = 0; b < bits_.size(); ++b) {
    if (bits_[b]) s[b] = '1';
  }
  return s;
}

std::size_t lfc_factor_count(const Group& group) {
  const int k = group.ap_length();
  return static_cast<std::size_t>(k) << (k - 1);
}

std::string_view to_string(LfcMode mode) noexcept {
  return mode == LfcMode::exact ? "exact" : "monte_carlo";
}

double LfcReport::deviation() const noexcept { return std::abs(estimate - 1.0); }

namespace {

// A selected factor nu(sum_t coeff_t * var[slot_var_t]). Variables are laid
// out as var[2 (i - 1) + b] = x_i^(b).
struct Factor {
  int j;
  std::vector<std::size_t> vars;
  std::vector<Residue> coeffs;
};

std::vector<Factor> selected_factors(const Group& group,
                                     const ExponentPattern& pattern) {
  const int k = group.ap_length();
  if (pattern.ap_length() != k) {
    throw PreconditionError("pattern k does not match the group");
  }
  std::vector<Factor> factors;
  for (int j = 1; j <= k; ++j) {
    const LinearForm form(group, j);
    for (std::uint64_t omega = 0; omega < (std::uint64_t{1} << (k - 1)); ++omega) {
      if (!pattern.bit(j, omega)) continue;
      Factor factor{j, {}, {}};
      for (std::size_t t = 0; t < form.arity(); ++t) {
        const int i = form.slot_index(t);
        const auto b = static_cast<std::size_t>((omega >> t) & 1U);
        factor.vars.push_back(2 * static_cast<std::size_t>(i - 1) + b);
        factor.coeffs.push_back(form.coefficients()[t]);
      }
      factors.push_back(std::move(factor));
    }
  }
  return factors;
}

double evaluate(const Group& group, std::span<const double> nu,
                const std::vector<Factor>& factors, std::span<const Residue> vars) {
  double product = 1.0;
  for (const Factor& factor : factors) {
    Residue arg = 0;
    for (std::size_t t = 0; t < factor.vars.size(); ++t) {
      arg = group.add(arg, group.mul(factor.coeffs[t], vars[factor.vars[t]]));
    }
    product *= nu[arg];
  }
  return product;
}

}  // namespace

double lfc_term(const WeightFn& nu, const ExponentPattern& pattern,
                std::span<const Residue> x0, std::span<const Residue> x1) {
  const Group& group = nu.group();
  const auto k = static_cast<std::size_t>(group.ap_length());
  if (x0.size() != k) throw ArityMismatch(k, x0.size());
  if (x1.size() != k) throw ArityMismatch(k, x1.size());
  std::vector<Residue> vars(2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    vars[2 * i] = x0[i] % group.modulus();
    vars[2 * i + 1] = x1[i] % group.modulus();
  }
  return evaluate(group, nu.values(), selected_factors(group, pattern), vars);
}

double lfc_exact_cost(const Group& group) noexcept {
  const double n = static_cast<double>(group.modulus());
  return 2.0 * std::pow(n, group.ap_length() + 1);
}

LfcReport lfc_exact(const WeightFn& nu, const ExponentPattern& pattern,
                    double budget) {
  const Group& group = nu.group();
  const double cost = lfc_exact_cost(group);
  if (cost > budget) throw BudgetExceeded(cost, budget);

  const int k = group.ap_length();
  const std::uint64_t n = group.modulus();
  const std::vector<Factor> factors = selected_factors(group, pattern);
  LfcReport report{pattern, 1.0, 0.0, 0, LfcMode::exact, 0};
  if (factors.empty()) return report;

  // The integrand only sees psi_j of each sub-tuple, and psi_j(t) = 0 for all
  // j whenever sum t_i = 0 and sum i t_i = 0. Shifting every x_i^(b) by such a
  // t is free and transitive on (x_1^(0), ..., x_{k-2}^(0)), so those are
  // pinned to 0 and the sum is scaled by N^(k-2). The remaining pair
  // x_k^(0), x_k^(1) never appears together in one factor, so its double sum
  // splits into a product of two single sums.
  const std::size_t xk0 = 2 * static_cast<std::size_t>(k - 1);
  std::vector<const Factor*> outer;
  std::vector<const Factor*> inner[2];
  for (const Factor& factor : factors) {
    if (factor.j == k) {
      outer.push_back(&factor);
      continue;
    }
    // For j < k the variable x_k is always the last slot.
    inner[factor.vars.back() - xk0].push_back(&factor);
  }

  // Free variables: x_i^(1) for i <= k-2, then x_{k-1}^(0), x_{k-1}^(1).
  std::vector<std::size_t> free_vars;
  for (int i = 1; i <= k - 2; ++i) free_vars.push_back(2 * static_cast<std::size_t>(i - 1) + 1);
  free_vars.push_back(2 * static_cast<std::size_t>(k - 2));
  free_vars.push_back(2 * static_cast<std::size_t>(k - 2) + 1);

  const std::span<const double> values = nu.values();
  std::vector<long double> partial(n, 0.0L);
  parallel_for(n, [&](std::size_t lead) {
    std::vector<Residue> vars(2 * static_cast<std::size_t>(k), 0);
    vars[free_vars[0]] = lead;
    std::vector<Residue> args[2];
    std::vector<Residue> steps[2];
    for (int b = 0; b < 2; ++b) {
      for (const Factor* f : inner[b]) steps[b].push_back(f->coeffs.back());
      args[b].resize(inner[b].size());
    }
    long double acc = 0.0L;
    // Odometer over the other free variables.
    for (;;) {
      double outer_product = 1.0;
      for (const Factor* f : outer) {
        Residue arg = 0;
        for (std::size_t t = 0; t < f->vars.size(); ++t) {
          arg = group.add(arg, group.mul(f->coeffs[t], vars[f->vars[t]]));
        }
        outer_product *= values[arg];
        if (outer_product == 0.0) break;
      }
      if (outer_product != 0.0) {
        double pair_product = outer_product;
        for (int b = 0; b < 2; ++b) {
          if (inner[b].empty()) {
            pair_product *= static_cast<double>(n);
            continue;
          }
          for (std::size_t q = 0; q < inner[b].size(); ++q) {
            const Factor* f = inner[b][q];
            Residue arg = 0;
            for (std::size_t t = 0; t + 1 < f->vars.size(); ++t) {
              arg = group.add(arg, group.mul(f->coeffs[t], vars[f->vars[t]]));
            }
            args[b][q] = arg;
          }
          long double single = 0.0L;
          for (std::uint64_t t = 0; t < n; ++t) {
            double product = 1.0;
            for (std::size_t q = 0; q < args[b].size(); ++q) {
              product *= values[args[b][q]];
              args[b][q] = group.add(args[b][q], steps[b][q]);
            }
            single += product;
          }
          pair_product *= static_cast<double>(single);
        }
        acc += pair_product;
      }
      std::size_t pos = 1;
      for (; pos < free_vars.size(); ++pos) {
        if (++vars[free_vars[pos]] < n) break;
        vars[free_vars[pos]] = 0;
      }
      if (pos == free_vars.size()) break;
    }
    partial[lead] = acc;
  });

  long double total = 0.0L;
  for (long double p : partial) total += p;
  const long double scale = std::pow(static_cast<long double>(n), k + 2);
  report.estimate = static_cast<double>(total / scale);
  report.sample_count = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 2 * k));
  return report;
}

LfcReport lfc_monte_carlo(const WeightFn& nu, const ExponentPattern& pattern,
                          std::uint64_t samples, std::uint64_t seed) {
  if (samples < 1) throw PreconditionError("Monte Carlo needs at least one sample");
  const Group& group = nu.group();
  const std::size_t var_count = 2 * static_cast<std::size_t>(group.ap_length());
  const std::vector<Factor> factors = selected_factors(group, pattern);
  const std::span<const double> values = nu.values();

  const std::uint64_t chunks = (samples + kLfcChunkSize - 1) / kLfcChunkSize;
  std::vector<detail::Moments> moments(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    const std::uint64_t begin = c * kLfcChunkSize;
    const std::uint64_t end = std::min(samples, begin + kLfcChunkSize);
    Stream stream(seed, c);
    std::vector<Residue> vars(var_count);
    detail::Moments local;
    for (std::uint64_t s = begin; s < end; ++s) {
      for (auto& v : vars) v = stream.below(group.modulus());
      local.add(evaluate(group, values, factors, vars));
    }
    moments[c] = local;
  });

  detail::Moments total;
  for (const detail::Moments& m : moments) total.merge(m);
  LfcReport report{pattern, total.mean, 0.0, samples, LfcMode::monte_carlo, seed};
  if (samples > 1) {
    const double variance = std::max(0.0, total.m2 / static_cast<double>(samples - 1));
    report.standard_error = std::sqrt(variance / static_cast<double>(samples));
  }
  return report;
}

LfcSweep lfc_sweep(const WeightFn& nu, std::size_t pattern_budget,
                   std::uint64_t samples, std::uint64_t seed, LfcMode mode,
                   double budget) {
  const int k = nu.group().ap_length();
  const std::size_t bit_count = lfc_factor_count(nu.group());
  std::vector<ExponentPattern> patterns;

  const bool enumerable =
      bit_count < 64 && (std::uint64_t{1} << bit_count) <= pattern_budget;
  if (enumerable) {
    const std::uint64_t total = std::uint64_t{1} << bit_count;
    patterns.reserve(total);
    for (std::uint64_t index = 0; index < total; ++index) {
      patterns.push_back(ExponentPattern::from_index(k, index));
    }
  } else if (pattern_budget > 0) {
    patterns.push_back(ExponentPattern::all_ones(k));
    std::set<std::string> seen{patterns.front().to_string()};
    Stream stream(seed, ~std::uint64_t{0});
    while (patterns.size() < pattern_budget) {
      ExponentPattern candidate = ExponentPattern::all_zeros(k);
      for (std::size_t b = 0; b < bit_count; ++b) candidate.set(b, (stream.next() >> 63) != 0);
      if (seen.insert(candidate.to_string()).second) patterns.push_back(std::move(candidate));
    }
  }

  LfcSweep sweep;
  sweep.reports.reserve(patterns.size());
  for (std::size_t idx = 0; idx < patterns.size(); ++idx) {
    LfcReport report = mode == LfcMode::exact
                           ? lfc_exact(nu, patterns[idx], budget)
                           : lfc_monte_carlo(nu, patterns[idx], samples,
                                             derive_seed(seed, idx));
    if (idx == 0 || report.deviation() > sweep.worst_deviation) {
      sweep.worst_deviation = report.deviation();
      sweep.worst_index = idx;
    }
    sweep.max_standard_error = std::max(sweep.max_standard_error, report.standard_error);
    sweep.reports.push_back(std::move(report));
  }
  return sweep;
}

}  // namespace transference
