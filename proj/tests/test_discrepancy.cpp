#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "transference/discrepancy.hpp"
#include "transference/errors.hpp"
#include "transference/parallel.hpp"

using namespace transference;

namespace {

WeightFn sparse_nu(const Group& g, double p, std::uint64_t seed) {
  return random_sparse_majorant(g, p, seed).nu;
}

}  // namespace

TEST(TestFamily, Validation) {
  EXPECT_THROW(TestFamily(1, 5, {{1, 1, 1, 1, 1}}), PreconditionError);
  EXPECT_THROW(TestFamily(2, 5, {{1, 1, 1, 1, 1}, {1, 1}}), PreconditionError);
  EXPECT_THROW(TestFamily(2, 5, {{1, 1, 1, 1, 1.5}, {1, 1, 1, 1, 1}}), PreconditionError);
  const TestFamily u = TestFamily::constant(3, 5, 1.0);
  EXPECT_EQ(u.arity(), 3u);
  EXPECT_EQ(u.face_size(), 25u);
  const Residue y[] = {1, 2, 3};
  EXPECT_EQ(u.face_index(y, 0), 2u * 5 + 3);
  EXPECT_EQ(u.face_index(y, 1), 1u * 5 + 3);
  EXPECT_EQ(u.face_index(y, 2), 1u * 5 + 2);
}

TEST(Convolution, ConstantOne) {
  const Group g = Group::make(7, 4);
  const LinearForm form(g, 2);
  const TestFamily u = TestFamily::constant(3, 7, 1.0);
  for (const double v : convolution_table(u, form)) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Convolution, PointMassesOnZ5) {
  const Group g = Group::make(5, 3);
  const LinearForm form(g, 1);  // y_1 + 2 y_2
  const TestFamily u(2, 5, {{1, 0, 0, 0, 0}, {1, 0, 0, 0, 0}});
  EXPECT_DOUBLE_EQ(generalized_convolution(u, form, 0), 0.2);
  for (Residue x = 1; x < 5; ++x) EXPECT_EQ(generalized_convolution(u, form, x), 0.0);
}

TEST(Convolution, MatchesConditionalMeanOracle) {
  Stream rng(1, 0);
  for (int k : {3, 4}) {
    for (std::uint64_t n : {5u, 7u}) {
      const Group g = Group::make(n, k);
      for (int j = 1; j <= k; ++j) {
        const LinearForm form(g, j);
        const TestFamily u = TestFamily::random(k - 1, n, rng);
        const auto table = convolution_table(u, form);
        for (Residue x = 0; x < n; ++x) {
          const double want = oracle::convolution(u, form, x);
          EXPECT_TRUE(oracle::close_rel(table[x], want, 1e-12));
          EXPECT_TRUE(oracle::close_rel(generalized_convolution(u, form, x), want, 1e-12));
        }
      }
    }
  }
}

TEST(Discrepancy, MatchesDirectSumOracle) {
  Stream rng(2, 0);
  for (int k : {3, 4}) {
    for (std::uint64_t n : {5u, 7u, 11u}) {
      const Group g = Group::make(n, k);
      const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
      for (int j = 1; j <= k; ++j) {
        const LinearForm form(g, j);
        const TestFamily u = TestFamily::random(k - 1, n, rng);
        const double want = oracle::discrepancy_signed(a, b, form, u);
        EXPECT_TRUE(oracle::close_rel(discrepancy_signed(a, b, form, u), want, 1e-12));
        EXPECT_TRUE(oracle::close_rel(discrepancy_value(a, b, form, u), std::abs(want), 1e-12));
      }
    }
  }
}

TEST(Discrepancy, TrivialCases) {
  const Group g = Group::make(11, 3);
  Stream rng(3, 0);
  const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
  const LinearForm form(g, 1);
  EXPECT_EQ(discrepancy_value(a, a, form, TestFamily::random(2, 11, rng)), 0.0);
  EXPECT_NEAR(discrepancy_value(a, b, form, TestFamily::constant(2, 11, 1.0)),
              std::abs(mean(a) - mean(b)), 1e-14);
}

TEST(Discrepancy, AffineInEachFunction) {
  const Group g = Group::make(7, 4);
  Stream rng(4, 0);
  const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
  const LinearForm form(g, 3);
  const TestFamily base = TestFamily::random(3, 7, rng);
  for (std::size_t i = 0; i < 3; ++i) {
    const TestFamily other = TestFamily::random(3, 7, rng);
    auto mix = [&](double t) {
      auto fns = base.functions();
      for (std::size_t e = 0; e < fns[i].size(); ++e) {
        fns[i][e] = (1 - t) * base[i][e] + t * other[i][e];
      }
      return discrepancy_signed(a, b, form, TestFamily(3, 7, fns));
    };
    const double v0 = mix(0.0), v1 = mix(1.0), vh = mix(0.5), vq = mix(0.25);
    EXPECT_NEAR(vh, 0.5 * (v0 + v1), 1e-13);
    EXPECT_NEAR(vq, 0.75 * v0 + 0.25 * v1, 1e-13);
  }
}

TEST(Discrepancy, LargeModulusKernelMatchesOracle) {
  // N >= 128 with r = 2 takes the FFT path in the search; check its objective.
  const Group g = Group::make(131, 3);
  Stream rng(5, 0);
  const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
  for (int j = 1; j <= 3; ++j) {
    const LinearForm form(g, j);
    const TestFamily u = TestFamily::random(2, 131, rng);
    EXPECT_TRUE(oracle::close_rel(discrepancy_signed(a, b, form, u),
                                  oracle::discrepancy_signed(a, b, form, u), 1e-12));
  }
}

TEST(Search, EqualFunctionsGiveZero) {
  const Group g = Group::make(11, 3);
  Stream rng(6, 0);
  const WeightFn a = oracle::random_weight(g, rng);
  const auto r = discrepancy_search(a, a, LinearForm(g, 1), 4, 1);
  EXPECT_EQ(r.value, 0.0);
  ASSERT_TRUE(r.witness.has_value());
}

TEST(Search, MatchesExactVertexEnumerationForSmallR2) {
  Stream rng(7, 0);
  int matched = 0, total = 0;
  for (std::uint64_t n : {5u, 7u}) {
    const Group g = Group::make(n, 3);
    for (int trial = 0; trial < 10; ++trial) {
      const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
      for (int j = 1; j <= 3; ++j) {
        const LinearForm form(g, j);
        const double exact = oracle::exact_cut_r2(a, b, form);
        const auto r = discrepancy_search(a, b, form, 8, 100 + trial);
        EXPECT_LE(r.value, exact + 1e-12);
        EXPECT_NEAR(discrepancy_value(a, b, form, *r.witness), r.value, 1e-12);
        ++total;
        if (std::abs(r.value - exact) <= 1e-12) ++matched;
      }
    }
  }
  EXPECT_EQ(matched, total);
}

TEST(Search, AscentIsMonotoneAndReplays) {
  Stream rng(8, 0);
  for (auto [n, k] : {std::pair{13u, 3}, {7u, 4}, {257u, 3}}) {
    const Group g = Group::make(n, k);
    const WeightFn a = sparse_nu(g, 0.3, 8);
    const WeightFn b = WeightFn::constant(g, 1.0);
    const LinearForm form(g, 1);
    const auto r = discrepancy_search(a, b, form, 4, 9);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NEAR(discrepancy_value(a, b, form, *r.witness), r.value, 1e-12);
    EXPECT_GE(r.value, 0.0);
    const double sign = r.signed_value >= 0 ? 1.0 : -1.0;
    for (std::size_t i = 1; i < r.ascent_trace.size(); ++i) {
      EXPECT_GE(sign * r.ascent_trace[i], sign * r.ascent_trace[i - 1] - 1e-12);
    }
    ASSERT_FALSE(r.ascent_trace.empty());
    EXPECT_NEAR(r.ascent_trace.back(), r.signed_value, 1e-12);
    // A search should beat random product tests.
    for (int t = 0; t < 5; ++t) {
      EXPECT_GE(r.value + 1e-12,
                discrepancy_value(a, b, form, TestFamily::random(k - 1, n, rng)));
    }
  }
}

TEST(Search, DeterministicAcrossThreadCounts) {
  const Group g = Group::make(301, 3);
  const WeightFn a = sparse_nu(g, 0.2, 3);
  const WeightFn b = WeightFn::constant(g, 1.0);
  set_thread_count(1);
  const auto one = discrepancy_search(a, b, LinearForm(g, 2), 6, 4);
  set_thread_count(4);
  const auto four = discrepancy_search(a, b, LinearForm(g, 2), 6, 4);
  set_thread_count(0);
  EXPECT_EQ(one.value, four.value);
  EXPECT_EQ(one.best_restart, four.best_restart);
  EXPECT_TRUE(*one.witness == *four.witness);
}

TEST(BoxNorm, ConstantMajorants) {
  const Group g = Group::make(11, 3);
  const LinearForm form(g, 1);
  EXPECT_EQ(box_norm_bound(WeightFn::constant(g, 1.0), form).value, 0.0);
  EXPECT_NEAR(box_norm_bound(WeightFn::constant(g, 1.3), form).value, 0.3, 1e-14);
  EXPECT_NEAR(box_norm_bound(WeightFn::constant(g, 0.5), form).value, 0.5, 1e-14);
  const Group g4 = Group::make(7, 4);
  EXPECT_NEAR(box_norm_bound(WeightFn::constant(g4, 1.25), LinearForm(g4, 2)).value, 0.25,
              1e-14);
}

TEST(BoxNorm, MatchesNestedLoopOracle) {
  Stream rng(9, 0);
  for (auto [n, k] : {std::pair{5u, 3}, {7u, 3}, {11u, 3}, {5u, 4}, {7u, 4}}) {
    const Group g = Group::make(n, k);
    for (int trial = 0; trial < 2; ++trial) {
      const WeightFn nu = trial == 0 ? interval_adversary(g, 0.4) : oracle::random_weight(g, rng);
      for (int j = 1; j <= k; ++j) {
        const LinearForm form(g, j);
        const auto b = box_norm_bound(nu, form);
        EXPECT_EQ(b.mode, BoundMode::exact);
        EXPECT_TRUE(oracle::close_rel(b.raw, oracle::box_raw(nu, form), 1e-10));
        EXPECT_TRUE(oracle::close_rel(b.value, oracle::box_value(nu, form), 1e-10));
      }
    }
  }
}

TEST(BoxNorm, MonteCarloFallbackAgreesWithExact) {
  const Group g = Group::make(31, 3);
  const WeightFn nu = interval_adversary(g, 0.3);
  const LinearForm form(g, 1);
  const auto exact = box_norm_bound(nu, form);
  const auto mc = box_norm_bound(nu, form, 10.0, 400000, 3);
  EXPECT_EQ(mc.mode, BoundMode::monte_carlo);
  EXPECT_GT(mc.standard_error, 0.0);
  EXPECT_LE(std::abs(mc.raw - exact.raw), 4 * mc.standard_error);
}

TEST(BoxNorm, DominatesRandomAndSearchedDiscrepancy) {
  Stream rng(10, 0);
  for (auto [n, k] : {std::pair{101u, 3}, {11u, 4}, {401u, 3}}) {
    const Group g = Group::make(n, k);
    for (GeneratorKind kind : {GeneratorKind::random_sparse, GeneratorKind::interval_adversary}) {
      const WeightFn nu = generate(g, GeneratorSpec{kind, 0.2, 0.5, n}).nu;
      const WeightFn one = WeightFn::constant(g, 1.0);
      const LinearForm form(g, 1);
      const double bound = box_norm_bound(nu, form).value;
      const auto found = discrepancy_search(nu, one, form, 4, 5);
      EXPECT_LE(found.value, bound + 1e-9);
      for (int t = 0; t < 5; ++t) {
        EXPECT_LE(discrepancy_value(nu, one, form, TestFamily::random(k - 1, n, rng, t % 2)),
                  bound + 1e-9);
      }
    }
  }
}

TEST(Transport, IdentityAndInverse) {
  const Group g = Group::make(11, 4);
  Stream rng(11, 0);
  const TestFamily u = TestFamily::random(3, 11, rng);
  EXPECT_TRUE(transport_witness(u, 2, 2, g) == u);
  for (int a = 1; a <= 4; ++a) {
    for (int b = 1; b <= 4; ++b) {
      EXPECT_TRUE(transport_witness(transport_witness(u, a, b, g), b, a, g) == u);
    }
  }
}

TEST(Transport, PreservesDiscrepancyExactly) {
  Stream rng(12, 0);
  for (auto [n, k] : {std::pair{7u, 3}, {11u, 3}, {7u, 4}, {11u, 4}}) {
    const Group g = Group::make(n, k);
    const WeightFn a = oracle::random_weight(g, rng), b = oracle::random_weight(g, rng);
    const TestFamily u = TestFamily::random(k - 1, n, rng);
    for (int from = 1; from <= k; ++from) {
      const double base = discrepancy_signed(a, b, LinearForm(g, from), u);
      for (int to = 1; to <= k; ++to) {
        const TestFamily moved = transport_witness(u, from, to, g);
        EXPECT_NEAR(discrepancy_signed(a, b, LinearForm(g, to), moved), base, 1e-12);
      }
    }
  }
}

TEST(Closure, IdentityHolds) {
  Stream rng(13, 0);
  for (auto [n, k] : {std::pair{5u, 3}, {7u, 3}, {5u, 4}, {7u, 4}}) {
    const Group g = Group::make(n, k);
    for (int j = 1; j <= k; ++j) {
      const LinearForm form(g, j);
      const TestFamily u = TestFamily::random(k - 1, n, rng, j % 2 == 0);
      const TestFamily v = TestFamily::random(k - 1, n, rng, j % 2 == 0);
      const Residue x = rng.below(n);
      const auto [lhs, rhs] = product_closure_witness(u, v, form, x, 1);
      EXPECT_NEAR(lhs, rhs, 1e-12);
      const auto [l1, r1] =
          product_closure_witness(u, TestFamily::constant(k - 1, n, 1.0), form, x, 1);
      EXPECT_NEAR(l1, generalized_convolution(u, form, x), 1e-14);
      EXPECT_NEAR(r1, l1, 1e-12);
    }
  }
  const Group g = Group::make(5, 3);
  const auto ones = TestFamily::constant(2, 5, 1.0);
  const auto [a, b] = product_closure_witness(ones, ones, LinearForm(g, 1), 2, 0);
  EXPECT_DOUBLE_EQ(a, 1.0);
  EXPECT_DOUBLE_EQ(b, 1.0);
}
