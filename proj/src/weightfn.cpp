#include "transference/weightfn.hpp"

#include <cmath>
#include <string>

#include "transference/errors.hpp"
#include "transference/rng.hpp"

namespace transference {

std::string_view to_string(WeightTag tag) noexcept {
  switch (tag) {
    case WeightTag::nu: return "nu";
    case WeightTag::f: return "f";
    case WeightTag::fmodel: return "fmodel";
    case WeightTag::signed_values: return "signed";
  }
  return "f";
}

WeightTag parse_weight_tag(std::string_view text) {
  if (text == "nu") return WeightTag::nu;
  if (text == "f") return WeightTag::f;
  if (text == "fmodel") return WeightTag::fmodel;
  if (text == "signed") return WeightTag::signed_values;
  throw PreconditionError("unknown weight tag '" + std::string(text) + "'");
}

WeightFn::WeightFn(const Group& group, std::vector<double> values,
                   WeightTag tag)
    : group_(group), tag_(tag), values_(std::move(values)) {
  if (values_.size() != group_.modulus()) {
    throw PreconditionError("weight function has " +
                            std::to_string(values_.size()) +
                            " values, expected N = " +
                            std::to_string(group_.modulus()));
  }
  for (std::size_t x = 0; x < values_.size(); ++x) {
    if (!std::isfinite(values_[x])) {
      throw PreconditionError("non-finite weight at x = " + std::to_string(x));
    }
    if (tag_ != WeightTag::signed_values && values_[x] < 0.0) {
      throw PreconditionError("negative weight at x = " + std::to_string(x));
    }
  }
}

WeightFn WeightFn::constant(const Group& group, double value, WeightTag tag) {
  return {group, std::vector<double>(group.modulus(), value), tag};
}

double mean(std::span<const double> values) noexcept {
  if (values.empty()) return 0.0;
  long double sum = 0.0L;
  for (double v : values) sum += v;
  return static_cast<double>(sum / static_cast<long double>(values.size()));
}

double mean(const WeightFn& w) noexcept { return mean(w.values()); }

std::string_view to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::uniform: return "uniform";
    case GeneratorKind::random_sparse: return "random_sparse";
    case GeneratorKind::planted_subset: return "planted_subset";
    case GeneratorKind::interval_adversary: return "interval_adversary";
  }
  return "random_sparse";
}

GeneratorKind parse_generator_kind(std::string_view text) {
  if (text == "uniform") return GeneratorKind::uniform;
  if (text == "random_sparse") return GeneratorKind::random_sparse;
  if (text == "planted_subset") return GeneratorKind::planted_subset;
  if (text == "interval_adversary") return GeneratorKind::interval_adversary;
  throw PreconditionError("unknown generator kind '" + std::string(text) + "'");
}

namespace {

void check_density(double p, const char* name) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw PreconditionError(std::string(name) + " must lie in (0, 1], got " +
                            std::to_string(p));
  }
}

}  // namespace

Majorant random_sparse_majorant(const Group& group, double density,
                                std::uint64_t seed) {
  check_density(density, "density p");
  const std::uint64_t n = group.modulus();
  if (density * static_cast<double>(n) < 1.0) {
    throw PreconditionError("p * N must be at least 1");
  }
  Stream stream(seed, 0);
  std::vector<Residue> support;
  for (Residue x = 0; x < n; ++x) {
    if (stream.bernoulli(density)) support.push_back(x);
  }
  if (support.empty()) {
    throw EmptySupport("random majorant drew an empty support; use another seed");
  }
  const double height = static_cast<double>(n) / static_cast<double>(support.size());
  std::vector<double> values(n, 0.0);
  for (Residue x : support) values[x] = height;
  return {WeightFn(group, std::move(values), WeightTag::nu), std::move(support)};
}

WeightFn planted_subset(const WeightFn& nu, std::span<const Residue> support,
                        double planted_fraction, std::uint64_t seed) {
  if (support.empty()) throw EmptySupport("planted subset needs a nonempty support");
  if (!(planted_fraction >= 0.0 && planted_fraction <= 1.0)) {
    throw PreconditionError("planted fraction must lie in [0, 1]");
  }
  Stream stream(seed, 0);
  std::vector<double> values(nu.size(), 0.0);
  for (Residue x : support) {
    if (x >= nu.size()) throw PreconditionError("support element outside Z_N");
    if (stream.bernoulli(planted_fraction)) values[x] = nu[x];
  }
  return {nu.group(), std::move(values), WeightTag::f};
}

WeightFn interval_adversary(const Group& group, double density) {
  check_density(density, "density p");
  const std::uint64_t n = group.modulus();
  const double raw = density * static_cast<double>(n);
  const double rounded = std::round(raw);
  auto length = static_cast<std::uint64_t>(
      std::abs(raw - rounded) < 1e-9 ? rounded : std::ceil(raw));
  if (length < 1) length = 1;
  const double height = static_cast<double>(n) / static_cast<double>(length);
  std::vector<double> values(n, 0.0);
  for (std::uint64_t x = 0; x < length; ++x) values[x] = height;
  return {group, std::move(values), WeightTag::nu};
}

WeightFn rescale_to_unit_mass(const WeightFn& f, double target) {
  const double m = mean(f);
  if (!(m > 0.0)) throw ZeroMass("cannot rescale a function with zero mass");
  if (!(target > 0.0 && target <= 1.0)) {
    throw PreconditionError("rescale target must lie in (0, 1]");
  }
  if (m <= 1.0) return f;
  std::vector<double> values(f.values().begin(), f.values().end());
  const double scale = target / m;
  for (double& v : values) v *= scale;
  return {f.group(), std::move(values), f.tag()};
}

GeneratedPair generate(const Group& group, const GeneratorSpec& spec) {
  Majorant majorant = [&]() -> Majorant {
    switch (spec.kind) {
      case GeneratorKind::uniform: {
        std::vector<Residue> all(group.modulus());
        for (Residue x = 0; x < all.size(); ++x) all[x] = x;
        return {WeightFn::constant(group, 1.0, WeightTag::nu), std::move(all)};
      }
      case GeneratorKind::interval_adversary: {
        WeightFn nu = interval_adversary(group, spec.density);
        std::vector<Residue> support;
        for (Residue x = 0; x < nu.size(); ++x) {
          if (nu[x] > 0.0) support.push_back(x);
        }
        return {std::move(nu), std::move(support)};
      }
      case GeneratorKind::random_sparse:
      case GeneratorKind::planted_subset:
        break;
    }
    return random_sparse_majorant(group, spec.density, spec.seed);
  }();
  WeightFn f = planted_subset(majorant.nu, majorant.support,
                              spec.planted_fraction, derive_seed(spec.seed, 1));
  return {std::move(majorant.nu), std::move(f), std::move(majorant.support)};
}

}  // namespace transference
