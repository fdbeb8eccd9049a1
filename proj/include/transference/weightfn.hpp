#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transference/residue.hpp"

namespace transference {

/// Role of a weight function in the pipeline. Only `signed_values` may hold
/// negative entries (it houses differences such as nu - 1).
enum class WeightTag { nu, f, fmodel, signed_values };

std::string_view to_string(WeightTag tag) noexcept;
WeightTag parse_weight_tag(std::string_view text);

/// A real-valued function on Z_N, immutable after construction.
class WeightFn {
 public:
  /// Throws PreconditionError on wrong length, non-finite entries, or
  /// negative entries in an unsigned function.
  WeightFn(const Group& group, std::vector<double> values,
           WeightTag tag = WeightTag::f);

  static WeightFn constant(const Group& group, double value,
                           WeightTag tag = WeightTag::f);

  const Group& group() const noexcept { return group_; }
  WeightTag tag() const noexcept { return tag_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](Residue x) const noexcept { return values_[x]; }

  WeightFn with_tag(WeightTag tag) const { return {group_, values_, tag}; }

 private:
  Group group_;
  WeightTag tag_;
  std::vector<double> values_;
};

double mean(const WeightFn& w) noexcept;
double mean(std::span<const double> values) noexcept;

enum class GeneratorKind { uniform, random_sparse, planted_subset, interval_adversary };

std::string_view to_string(GeneratorKind kind) noexcept;
GeneratorKind parse_generator_kind(std::string_view text);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::random_sparse;
  double density = 1.0;           // p
  double planted_fraction = 1.0;  // delta
  std::uint64_t seed = 0;
};

struct Majorant {
  WeightFn nu;
  std::vector<Residue> support;  // increasing
};

/// Each x joins S independently with probability p; nu = (N/|S|) 1_S, so the
/// mean of nu is exactly 1. Throws EmptySupport when the draw is empty.
Majorant random_sparse_majorant(const Group& group, double density,
                                std::uint64_t seed);

/// f = 1_A nu with A keeping each element of `support` independently with
/// probability delta.
WeightFn planted_subset(const WeightFn& nu, std::span<const Residue> support,
                        double planted_fraction, std::uint64_t seed);

/// nu = (N/m) 1_{0..m-1} with m = ceil(pN). Fails the linear forms condition
/// badly for small p.
WeightFn interval_adversary(const Group& group, double density);

/// When mean(f) > 1 returns target * f / mean(f), otherwise f unchanged.
/// Throws ZeroMass when mean(f) <= 0.
WeightFn rescale_to_unit_mass(const WeightFn& f, double target);

struct GeneratedPair {
  WeightFn nu;
  WeightFn f;
  std::vector<Residue> support;
};

/// Builds the majorant selected by spec.kind, then plants f inside it.
/// `uniform` gives nu = 1; `planted_subset` is the random sparse majorant
/// with the planted f, same as `random_sparse`.
GeneratedPair generate(const Group& group, const GeneratorSpec& spec);

enum class FileFormat { json, csv };

FileFormat parse_file_format(std::string_view text);

/// JSON {"N", "k", "tag", "values"} or CSV with a two-line header
/// ("N,k,tag" then the values of those fields) and one value per line.
std::string serialize(const WeightFn& w, FileFormat format);
/// Accepts either format, detected from the content.
WeightFn parse_weight_fn(std::string_view text);

void write_weight_file(const std::filesystem::path& path, const WeightFn& w,
                       FileFormat format = FileFormat::json);
WeightFn read_weight_file(const std::filesystem::path& path);

}  // namespace transference
