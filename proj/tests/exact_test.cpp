#include <gtest/gtest.h>

#include "rrobust/exact.hpp"
#include "rrobust/generators.hpp"
#include "test_graphs.hpp"

using namespace rrobust;
using namespace rrobust::testing;

namespace {

void expect_valid_witness(const Digraph& g, const ExactResult& res, std::size_t r) {
  ASSERT_FALSE(res.robust);
  ASSERT_TRUE(res.witness.has_value());
  ASSERT_TRUE(res.witness->valid());
  EXPECT_FALSE(is_r_reachable(g, res.witness->a(), r));
  EXPECT_FALSE(is_r_reachable(g, res.witness->b(), r));
}

}  // namespace

TEST(ExactOracle, TwoTriangles) {
  const Digraph g = two_triangles();
  const auto res = exact_is_r_robust(g, 1);
  expect_valid_witness(g, res, 1);
  // First violation in ternary order: A = {0,1,2}, B = {3,4,5}.
  EXPECT_EQ(res.witness->a(), (VertexSet{0, 1, 2}));
  EXPECT_EQ(res.witness->b(), (VertexSet{3, 4, 5}));
  EXPECT_TRUE(res.witness->c().empty());
  EXPECT_EQ(exact_max_robustness(g), 0u);
}

TEST(ExactOracle, DirectedFiveCycle) {
  const Digraph g = directed_cycle(5);
  EXPECT_TRUE(exact_is_r_robust(g, 1).robust);
  expect_valid_witness(g, exact_is_r_robust(g, 2), 2);
  EXPECT_EQ(exact_max_robustness(g), 1u);
}

TEST(ExactOracle, CompleteSix) {
  const Digraph g = complete(6);
  EXPECT_TRUE(exact_is_r_robust(g, 3).robust);
  expect_valid_witness(g, exact_is_r_robust(g, 4), 4);
  EXPECT_EQ(exact_max_robustness(g), 3u);
  EXPECT_EQ(exact_max_robustness(complete(12)), 6u);
}

TEST(ExactOracle, ZeroRobustIsTrivial) {
  EXPECT_TRUE(exact_is_r_robust(two_triangles(), 0).robust);
}

TEST(ExactOracle, SizeGuard) {
  const Digraph g = complete(14);
  EXPECT_THROW(exact_is_r_robust(g, 1), SizeGuardError);
  ExactOptions opts;
  opts.max_n = 14;
  EXPECT_TRUE(exact_is_r_robust(g, 1, opts).robust);
  EXPECT_THROW(exact_is_r_robust(Digraph::from_edges(1, {}), 1), std::invalid_argument);
}

TEST(ExactOracle, AgreesWithLiteralEnumeration) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 3 + seed % 6;
    const Digraph g = generate_uniform_digraph(n, 0.3 + 0.1 * (seed % 5), seed);
    const std::size_t expected = literal_max_robustness(g);
    EXPECT_EQ(exact_max_robustness(g), expected) << "seed " << seed;
    for (std::size_t r = 0; r <= n; ++r) {
      const auto res = exact_is_r_robust(g, r);
      EXPECT_EQ(res.robust, r <= expected) << "seed " << seed << " r " << r;
      if (!res.robust) expect_valid_witness(g, res, r);
    }
  }
}

TEST(ExactOracle, MonotoneInR) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    const Digraph g = generate_uniform_digraph(8, 0.6, seed);
    bool prev = true;
    for (std::size_t r = 0; r <= 8; ++r) {
      const bool now = exact_is_r_robust(g, r).robust;
      if (!prev) { EXPECT_FALSE(now); }
      prev = now;
    }
  }
}

TEST(ExactOracle, MaxRobustnessAtMostHalf) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 2 + seed % 10;
    const Digraph g = generate_uniform_digraph(n, 0.9, seed);
    EXPECT_LE(exact_max_robustness(g), (n + 1) / 2);
  }
}

TEST(ExactOracle, WitnessIndependentOfWorkers) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Digraph g = generate_uniform_digraph(11, 0.5, seed);
    ExactOptions one, many;
    many.workers = 8;
    for (std::size_t r = 1; r <= 4; ++r) {
      const auto a = exact_is_r_robust(g, r, one), b = exact_is_r_robust(g, r, many);
      EXPECT_EQ(a.robust, b.robust);
      EXPECT_EQ(a.witness, b.witness);
    }
  }
}

TEST(BetaClose, SmallestBetaIsPlainRobustness) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 4 + seed % 6;
    const Digraph g = generate_uniform_digraph(n, 0.5, seed);
    for (std::size_t r = 0; r <= 4; ++r)
      EXPECT_EQ(exact_is_beta_close_robust(g, r, 1, n), exact_is_r_robust(g, r).robust);
  }
}

TEST(BetaClose, MoreThanHalfIsVacuous) {
  const Digraph g = two_triangles();
  EXPECT_FALSE(exact_is_beta_close_robust(g, 1, 1, 2));  // |A| = |B| = 3 = n/2 qualifies
  EXPECT_TRUE(exact_is_beta_close_robust(g, 1, 4, 6));
  EXPECT_TRUE(exact_is_beta_close_robust(g, 5, 1, 1));
}

TEST(BetaClose, RangeChecked) {
  const Digraph g = complete(6);
  EXPECT_THROW(exact_is_beta_close_robust(g, 1, 1, 7), std::invalid_argument);  // below 1/n
  EXPECT_THROW(exact_is_beta_close_robust(g, 1, 3, 2), std::invalid_argument);
  EXPECT_THROW(exact_is_beta_close_robust(g, 1, 1, 0), std::invalid_argument);
}

TEST(BetaClose, SmallSetsReachableUnderDegreeAssumption) {
  // d_min > 2r + delta: r-robust iff r-robust over pairs of size >= delta.
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 200 && checked < 40; ++seed) {
    const std::size_t n = 6 + seed % 5;
    const Digraph g = generate_uniform_digraph(n, 0.75, seed);
    const std::size_t d_min = min_in_degree(g).degree;
    for (std::size_t r = 1; 2 * r + 1 < d_min; ++r)
      for (std::size_t delta = 1; 2 * r + delta < d_min; ++delta) {
        EXPECT_EQ(exact_is_r_robust(g, r).robust, exact_is_beta_close_robust(g, r, delta, n));
        ++checked;
      }
  }
  EXPECT_GE(checked, 40u);
}
