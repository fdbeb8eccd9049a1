#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "oracles.hpp"
#include "transference/ap_count.hpp"
#include "transference/errors.hpp"

using namespace transference;

TEST(ApDensity, Constants) {
  const Group g = Group::make(101, 3);
  EXPECT_EQ(ap_density_direct(WeightFn::constant(g, 1.0), 3).value, 1.0);
  EXPECT_EQ(ap_density_direct(WeightFn::constant(g, 0.0), 3).value, 0.0);
  EXPECT_NEAR(ap3_density_fourier(WeightFn::constant(g, 1.0)).value, 1.0, 1e-14);
  EXPECT_NEAR(ap3_density_fourier(WeightFn::constant(g, 0.3)).value, 0.027, 1e-15);
  const Group g5 = Group::make(101, 5);
  EXPECT_NEAR(ap_density_direct(WeightFn::constant(g5, 0.5), 5).value, 1.0 / 32, 1e-15);
}

TEST(ApDensity, SinglePointOnZ5) {
  const Group g = Group::make(5, 3);
  const WeightFn f(g, {1.0, 0.0, 0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(ap_density_direct(f, 3).value, 1.0 / 25.0);
  EXPECT_NEAR(ap3_density_fourier(f).value, 1.0 / 25.0, 1e-15);
}

TEST(ApDensity, DirectMatchesOracle) {
  Stream rng(1, 0);
  for (int k : {3, 4, 5}) {
    for (std::uint64_t n : {7u, 11u, 13u, 101u}) {
      const Group g = Group::make(n, k);
      const WeightFn f = oracle::random_unit(g, rng);
      EXPECT_TRUE(oracle::close_rel(ap_density_direct(f, k).value, oracle::ap_density(f, k),
                                    1e-12));
    }
  }
}

TEST(ApDensity, FourierMatchesDirect) {
  Stream rng(2, 0);
  for (std::uint64_t n : {1009u, 1001u, 3u, 5u, 2187u, 4095u}) {
    const Group g = Group::make(n, 3);
    const WeightFn f = oracle::random_unit(g, rng);
    const double direct = ap_density_direct(f, 3).value;
    const double fourier = ap3_density_fourier(f).value;
    EXPECT_TRUE(oracle::close_rel(fourier, direct, 1e-9)) << n;
  }
}

TEST(ApDensity, FourierRejectsOtherK) {
  const Group g = Group::make(11, 4);
  EXPECT_THROW(ap3_density_fourier(WeightFn::constant(g, 1.0), 4), WrongK);
  EXPECT_THROW(ap_density(WeightFn::constant(g, 1.0), 4, ApMethod::fourier), WrongK);
}

TEST(ApDensity, TranslationAndDilationInvariance) {
  Stream rng(3, 0);
  for (int k : {3, 4}) {
    const std::uint64_t n = 211;
    const Group g = Group::make(n, k);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.bernoulli(0.4) ? 1.0 : 0.0;
    const WeightFn f(g, v);
    const double base = ap_density_direct(f, k).value;
    for (int trial = 0; trial < 5; ++trial) {
      const std::uint64_t c = rng.below(n);
      const std::uint64_t a = 1 + rng.below(n - 1);
      std::vector<double> shifted(n), dilated(n);
      for (std::uint64_t x = 0; x < n; ++x) {
        shifted[x] = v[(x + c) % n];
        dilated[x] = v[(a * x) % n];
      }
      EXPECT_EQ(ap_density_direct(WeightFn(g, shifted), k).value, base);
      EXPECT_EQ(ap_density_direct(WeightFn(g, dilated), k).value, base);
    }
  }
}

TEST(ApGap, Examples) {
  const Group g = Group::make(31, 3);
  Stream rng(4, 0);
  const WeightFn f = oracle::random_unit(g, rng);
  EXPECT_EQ(ap_gap(f, f, 3), 0.0);
  EXPECT_EQ(ap_gap(WeightFn::constant(g, 1.0), WeightFn::constant(g, 0.0), 3), 1.0);
  const WeightFn other = oracle::random_unit(Group::make(37, 3), rng);
  EXPECT_THROW(ap_gap(f, other, 3), PreconditionError);
}

TEST(ApDensity, FourierIsFasterAtTenThousand) {
  const Group g = Group::make(10001, 3);
  Stream rng(5, 0);
  const WeightFn f = oracle::random_unit(g, rng);
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  const double direct = ap_density_direct(f, 3).value;
  auto t1 = clock::now();
  const double fourier = ap3_density_fourier(f).value;
  auto t2 = clock::now();
  EXPECT_TRUE(oracle::close_rel(direct, fourier, 1e-9));
  EXPECT_GT(std::chrono::duration<double>(t1 - t0).count(),
            10 * std::chrono::duration<double>(t2 - t1).count());
}
