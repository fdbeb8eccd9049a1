#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "transference/errors.hpp"
#include "transference/weightfn.hpp"

using namespace transference;

namespace {

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "transference_weightfn_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(WeightFn, Validation) {
  const Group g = Group::make(7, 3);
  EXPECT_THROW(WeightFn(g, {1.0, 2.0}), PreconditionError);
  EXPECT_THROW(WeightFn(g, std::vector<double>(7, -0.5)), PreconditionError);
  EXPECT_THROW(WeightFn(g, std::vector<double>(7, NAN)), PreconditionError);
  EXPECT_NO_THROW(WeightFn(g, std::vector<double>(7, -0.5), WeightTag::signed_values));
}

TEST(WeightFn, Means) {
  const Group g = Group::make(10007, 3);
  EXPECT_EQ(mean(WeightFn::constant(g, 1.0)), 1.0);
  EXPECT_EQ(mean(WeightFn::constant(g, 0.0)), 0.0);
}

TEST(WeightFn, IndicatorOverDensityHasUnitMean) {
  const Group g = Group::make(1001, 3);
  std::vector<double> v(1001, 0.0);
  const double p = 143.0 / 1001.0;
  for (std::size_t x = 0; x < 1001; x += 7) v[x] = 1.0 / p;
  EXPECT_DOUBLE_EQ(mean(WeightFn(g, v)), 1.0);
}

TEST(RandomSparse, DenseLimitIsConstantOne) {
  const Group g = Group::make(101, 3);
  const Majorant m = random_sparse_majorant(g, 1.0, 3);
  EXPECT_EQ(m.support.size(), 101u);
  for (std::size_t x = 0; x < 101; ++x) EXPECT_EQ(m.nu[x], 1.0);
}

TEST(RandomSparse, SupportConcentrates) {
  const Group g = Group::make(10001, 3);
  const Majorant m = random_sparse_majorant(g, 0.2, 1);
  EXPECT_LE(std::abs(static_cast<double>(m.support.size()) - 2000.2), 200.0);
  EXPECT_DOUBLE_EQ(mean(m.nu), 1.0);
  EXPECT_TRUE(std::is_sorted(m.support.begin(), m.support.end()));
  for (Residue x : m.support) EXPECT_GT(m.nu[x], 0.0);
}

TEST(RandomSparse, DeterministicInSeed) {
  const Group g = Group::make(1001, 3);
  const Majorant a = random_sparse_majorant(g, 0.3, 11);
  const Majorant b = random_sparse_majorant(g, 0.3, 11);
  const Majorant c = random_sparse_majorant(g, 0.3, 12);
  EXPECT_EQ(a.support, b.support);
  EXPECT_NE(a.support, c.support);
}

TEST(RandomSparse, Preconditions) {
  const Group g = Group::make(101, 3);
  EXPECT_THROW(random_sparse_majorant(g, 0.0, 1), PreconditionError);
  EXPECT_THROW(random_sparse_majorant(g, 1.5, 1), PreconditionError);
  EXPECT_THROW(random_sparse_majorant(g, 0.005, 1), PreconditionError);
}

TEST(PlantedSubset, ExtremesAndDomination) {
  const Group g = Group::make(10001, 3);
  const Majorant m = random_sparse_majorant(g, 0.2, 4);
  const WeightFn all = planted_subset(m.nu, m.support, 1.0, 5);
  const WeightFn none = planted_subset(m.nu, m.support, 0.0, 5);
  const WeightFn half = planted_subset(m.nu, m.support, 0.5, 5);
  for (std::size_t x = 0; x < g.modulus(); ++x) {
    EXPECT_EQ(all[x], m.nu[x]);
    EXPECT_EQ(none[x], 0.0);
    EXPECT_LE(half[x], m.nu[x]);
    EXPECT_TRUE(half[x] == 0.0 || half[x] == m.nu[x]);
  }
  const double s = static_cast<double>(m.support.size());
  const double sigma = std::sqrt(0.25 / s);
  EXPECT_LE(std::abs(mean(half) / mean(m.nu) - 0.5), 5 * sigma);
}

TEST(IntervalAdversary, SupportIsCeilPN) {
  for (auto [n, p] : {std::pair{101u, 0.1}, {1001u, 0.37}, {7u, 1.0}}) {
    const Group g = Group::make(n, 3);
    const WeightFn nu = interval_adversary(g, p);
    const auto m = static_cast<std::size_t>(std::ceil(p * n - 1e-9));
    for (std::size_t x = 0; x < n; ++x) {
      EXPECT_EQ(nu[x] > 0.0, x < m) << "x=" << x;
    }
    EXPECT_DOUBLE_EQ(mean(nu), 1.0);
  }
  const Group g = Group::make(101, 3);
  const WeightFn full = interval_adversary(g, 1.0);
  for (std::size_t x = 0; x < 101; ++x) EXPECT_EQ(full[x], 1.0);
}

TEST(Rescale, Branches) {
  const Group g = Group::make(11, 3);
  const WeightFn half = WeightFn::constant(g, 0.5);
  const WeightFn kept = rescale_to_unit_mass(half, 0.3);
  for (std::size_t x = 0; x < 11; ++x) EXPECT_EQ(kept[x], 0.5);

  const WeightFn two = WeightFn::constant(g, 2.0);
  const WeightFn scaled = rescale_to_unit_mass(two, 0.5);
  for (std::size_t x = 0; x < 11; ++x) EXPECT_DOUBLE_EQ(scaled[x], 0.5);
  EXPECT_LE(mean(scaled), 1.0);

  EXPECT_THROW(rescale_to_unit_mass(WeightFn::constant(g, 0.0), 0.5), ZeroMass);
}

TEST(Generate, KindsProduceDominatedPairs) {
  const Group g = Group::make(1001, 3);
  for (GeneratorKind kind : {GeneratorKind::uniform, GeneratorKind::random_sparse,
                             GeneratorKind::planted_subset,
                             GeneratorKind::interval_adversary}) {
    const GeneratedPair pair = generate(g, GeneratorSpec{kind, 0.25, 0.5, 9});
    for (std::size_t x = 0; x < 1001; ++x) ASSERT_LE(pair.f[x], pair.nu[x]);
    EXPECT_NEAR(mean(pair.nu), 1.0, 1e-12) << to_string(kind);
    EXPECT_EQ(parse_generator_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_generator_kind("bogus"), PreconditionError);
}

TEST(Serialization, JsonAndCsvRoundTripExactly) {
  const Group g = Group::make(101, 4);
  const GeneratedPair pair = generate(g, GeneratorSpec{GeneratorKind::random_sparse, 0.3, 0.5, 2});
  for (FileFormat format : {FileFormat::json, FileFormat::csv}) {
    const std::string text = serialize(pair.nu, format);
    const WeightFn back = parse_weight_fn(text);
    EXPECT_EQ(back.group(), g);
    EXPECT_EQ(back.tag(), WeightTag::nu);
    for (std::size_t x = 0; x < 101; ++x) EXPECT_EQ(back[x], pair.nu[x]);

    const auto path = scratch(format == FileFormat::json ? "nu.json" : "nu.csv");
    write_weight_file(path, pair.nu, format);
    const WeightFn disk = read_weight_file(path);
    for (std::size_t x = 0; x < 101; ++x) EXPECT_EQ(disk[x], pair.nu[x]);
  }
}

TEST(Serialization, RejectsMalformedInput) {
  EXPECT_THROW(parse_weight_fn(""), PreconditionError);
  EXPECT_THROW(parse_weight_fn("{\"N\": 5, \"k\": 3, \"tag\": \"f\", \"values\": [1, 2]}"),
               PreconditionError);
  EXPECT_THROW(parse_weight_fn("{\"N\": 6, \"k\": 3, \"tag\": \"f\", \"values\": [1,1,1,1,1,1]}"),
               CoprimalityViolation);
  EXPECT_THROW(parse_weight_fn("N,k,tag\n3,3,f\n1\n2\n"), PreconditionError);
  EXPECT_THROW(read_weight_file(scratch("does_not_exist.json")), PreconditionError);
}
