#include <gtest/gtest.h>

#include <boost/rational.hpp>

#include "rrobust/exact.hpp"
#include "rrobust/generators.hpp"
#include "rrobust/tester.hpp"
#include "test_graphs.hpp"

using namespace rrobust;
using namespace rrobust::testing;

namespace {

TestConfig config(std::size_t r, std::size_t delta_cap, std::size_t t = 9) {
  TestConfig cfg;
  cfg.r = r;
  cfg.delta_cap = delta_cap;
  cfg.t = t;
  return cfg;
}

void expect_sound(const Digraph& g, const TestOutcome& out, const TestConfig& cfg) {
  EXPECT_TRUE(verify_rejection(g, out, cfg));
  if (out.verdict != Verdict::kReject) return;
  ASSERT_TRUE(out.witness.has_value());
  EXPECT_TRUE(out.witness->valid());
  if (out.witness_kind == WitnessKind::kSampled) {
    EXPECT_FALSE(is_r_reachable(g, out.witness->a(), cfg.r + cfg.delta_cap));
    EXPECT_FALSE(is_r_reachable(g, out.witness->b(), cfg.r + cfg.delta_cap));
    EXPECT_LE(*out.witness_R, cfg.r + cfg.delta_cap);
  }
}

const PlantedGraph& planted200() {
  static const PlantedGraph p = generate_planted({200, 70, 70, 10, 2024});
  return p;
}

}  // namespace

TEST(Thresholds, FrozenCases) {
  // n=200, r=11, delta=30, t=9, count=1: 800 > 666.
  EXPECT_TRUE(thresholds::restrict_exceeds(1, 200, 11, 30, 9));
  EXPECT_FALSE(thresholds::restrict_exceeds(0, 200, 11, 30, 9));
  // n=100, r=10, delta=40, t=10, count=2: 800 == 800, strict.
  EXPECT_FALSE(thresholds::restrict_exceeds(2, 100, 10, 40, 10));
  EXPECT_TRUE(thresholds::restrict_exceeds(3, 100, 10, 40, 10));
  // 4r + 3 delta = 134 for r=11, delta=30: count 33 -> 132, 34 -> 136.
  EXPECT_FALSE(thresholds::move_exceeds(33, 11, 30));
  EXPECT_TRUE(thresholds::move_exceeds(34, 11, 30));
  EXPECT_FALSE(thresholds::reach_meets(40, 11, 30));
  EXPECT_TRUE(thresholds::reach_meets(41, 11, 30));
}

TEST(Thresholds, MatchRationalEvaluation) {
  using Q = boost::rational<long long>;
  Rng rng(5);
  for (int i = 0; i < 20000; ++i) {
    const long long n = 1 + static_cast<long long>(rng.below(400));
    const long long r = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
    const long long delta = 1 + static_cast<long long>(rng.below(static_cast<std::uint64_t>(n)));
    const long long t = 1 + static_cast<long long>(rng.below(60));
    const long long count = static_cast<long long>(rng.below(static_cast<std::uint64_t>(std::max(t, n)) + 1));
    const Q p(r, n), eps(delta, n);
    EXPECT_EQ(thresholds::restrict_exceeds(count, n, r, delta, t), Q(count, t) > p + eps / 4);
    EXPECT_EQ(thresholds::move_exceeds(count, r, delta), Q(count) > p * n + 3 * eps * n / 4);
    EXPECT_EQ(thresholds::reach_meets(count, r, delta), Q(count) >= p * n + eps * n);
  }
}

TEST(Restrict, KeepsSampleBlocksAndFollowsBranches) {
  // Vertex 0 samples, 1..3 are in-neighbors of everything (bidirectional K_5).
  const Digraph g = complete(5);
  const SampleSet u({0, 1, 1});
  const SamplePartition part{Block::kA, Block::kB};
  const TestConfig cfg = config(1, 1, 3);
  const TriPartition p = restrict_to_partition(g, u, part, cfg);
  EXPECT_EQ(p[0], Block::kA);
  EXPECT_EQ(p[1], Block::kB);
  // For v = 2..4: |N n (U_A u U_C)| = 1, |N n (U_B u U_C)| = 2, t = 3, n = 5,
  // threshold 4*5*count > 5*3: 20 > 15 and 40 > 15, both exceed -> C.
  for (Vertex v = 2; v < 5; ++v) EXPECT_EQ(p[v], Block::kC);
}

TEST(Restrict, ManualBranchCheck) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Digraph g = generate_uniform_digraph(30, 0.4, seed);
    Rng rng(seed);
    const SampleSet u = sample_vertices(30, 6, rng);
    if (u.support().size() < 2) continue;
    const SamplePartition part = random_partition(u, rng);
    const TestConfig cfg = config(2, 6, 6);
    const TriPartition p = restrict_to_partition(g, u, part, cfg);
    for (Vertex v = 0; v < 30; ++v) {
      if (auto idx = u.index_of(v); idx >= 0) {
        EXPECT_EQ(p[v], part[static_cast<std::size_t>(idx)]);
        continue;
      }
      const auto ac = weighted_block_count(g, v, u, part, {Block::kA, Block::kC});
      const auto bc = weighted_block_count(g, v, u, part, {Block::kB, Block::kC});
      const bool hi_ac = 4 * 30 * ac > (4 * 2 + 6) * 6, hi_bc = 4 * 30 * bc > (4 * 2 + 6) * 6;
      const Block expected = hi_ac && hi_bc ? Block::kC : hi_ac ? Block::kA : hi_bc ? Block::kB : Block::kC;
      EXPECT_EQ(p[v], expected);
    }
  }
}

TEST(Restrict, RequiresBothSampleSides) {
  const Digraph g = complete(4);
  EXPECT_THROW(restrict_to_partition(g, SampleSet({0, 1}), {Block::kA, Block::kC}, config(1, 1)),
               std::invalid_argument);
}

TEST(MovePass, UnchangedBelowThreshold) {
  const PlantedGraph& p = planted200();
  const TestConfig cfg = config(11, 30);
  const TriPartition moved = move_pass(p.graph, p.truth, SampleSet({0}), cfg, false);
  EXPECT_EQ(moved, p.truth);
}

TEST(MovePass, MovesToOtherSideOrC) {
  // Vertex 0 in A' with in-neighbors: 1..6 in B', 7..8 in C'. r=1, delta=1:
  // threshold 4*count > 7, i.e. count >= 2.
  std::vector<Edge> e;
  for (Vertex w = 1; w <= 8; ++w) e.push_back({w, 0});
  const Digraph g = Digraph::from_edges(12, e);
  std::vector<Block> labels(12, Block::kC);
  labels[0] = Block::kA;
  labels[9] = Block::kA;
  for (Vertex w = 1; w <= 6; ++w) labels[w] = Block::kB;
  const TestConfig cfg = config(1, 1);
  // |N n (B'uC')| = 8 > threshold, |N n (A'uC')| = 2 -> 4*2 = 8 > 7: to C.
  EXPECT_EQ(move_pass(g, TriPartition(labels), SampleSet({11}), cfg, false)[0], Block::kC);
  // Make 7, 8 part of B': |N n (A'uC')| = 0 -> to B.
  labels[7] = labels[8] = Block::kB;
  EXPECT_EQ(move_pass(g, TriPartition(labels), SampleSet({11}), cfg, false)[0], Block::kB);
  // Sampled vertices stay unless practical.
  EXPECT_EQ(move_pass(g, TriPartition(labels), SampleSet({0}), cfg, false)[0], Block::kA);
  EXPECT_EQ(move_pass(g, TriPartition(labels), SampleSet({0}), cfg, true)[0], Block::kB);
  // Practical mode never empties A''.
  labels[9] = Block::kC;
  EXPECT_EQ(move_pass(g, TriPartition(labels), SampleSet({0}), cfg, true)[0], Block::kA);
}

TEST(MovePass, FrozenSnapshotPostcondition) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Digraph g = generate_uniform_digraph(40, 0.35, seed);
    Rng rng(seed * 31 + 1);
    std::vector<Block> labels(40);
    for (auto& x : labels) x = static_cast<Block>(rng.below(3));
    const TriPartition before(labels);
    const SampleSet u = sample_vertices(40, 5, rng);
    const TestConfig cfg = config(1 + seed % 3, 1 + seed % 5);
    for (bool practical : {false, true}) {
      const TriPartition after = move_pass(g, before, u, cfg, practical);
      for (Vertex v = 0; v < 40; ++v) {
        const VertexSet own = before[v] == Block::kA ? before.a() : before.b();
        const bool exceeds = before[v] != Block::kC &&
                             thresholds::move_exceeds(outside_count(g, v, own), cfg.r, cfg.delta_cap);
        if (after[v] != before[v]) {
          EXPECT_TRUE(exceeds) << "vertex " << v << " moved below threshold";
          if (!practical) { EXPECT_LT(u.index_of(v), 0); }
        } else if (exceeds && !practical) {
          EXPECT_GE(u.index_of(v), 0) << "vertex " << v << " above threshold did not move";
        }
      }
      if (practical && before.valid()) { EXPECT_TRUE(after.valid()); }
    }
  }
}

TEST(TestReach, Examples) {
  const Digraph k12 = complete(12);
  const TestConfig cfg = config(2, 4);
  TriPartition single = TriPartition::from_sets(12, {0}, {1, 2, 3});
  EXPECT_TRUE(test_reach(k12, single, cfg));  // 11 >= 6

  const PlantedGraph& p = planted200();
  EXPECT_FALSE(test_reach(p.graph, p.truth, config(11, 30)));  // rbar = 10 < 41
  // With r + delta = rbar the true sides are reachable.
  EXPECT_TRUE(test_reach(p.graph, p.truth, config(5, 5)));
  // Empty side means no refutation.
  EXPECT_TRUE(test_reach(k12, TriPartition(std::vector<Block>(12, Block::kA)), cfg));
}

TEST(SampledTester, AcceptsRobustCompleteGraph) {
  const Digraph k12 = complete(12);
  for (Mode mode : {Mode::kRandom, Mode::kExhaustive})
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      TestConfig cfg = config(2, 4);
      cfg.mode = mode;
      cfg.seed = seed;
      const auto out = sampled_rbst_tst(k12, cfg);
      EXPECT_EQ(out.verdict, Verdict::kAccept);
      expect_sound(k12, out, cfg);
      EXPECT_GT(out.partitions_examined, 0u);
    }
}

TEST(SampledTester, RejectsPlantedGraph) {
  const PlantedGraph& p = planted200();
  TestConfig cfg = config(11, 30);
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    const auto out = sampled_rbst_tst(p.graph, cfg);
    expect_sound(p.graph, out, cfg);
    rejected += out.verdict == Verdict::kReject;
  }
  EXPECT_GE(rejected, 4);
}

TEST(SampledTester, ExhaustiveRejectsPlantedGraph) {
  const PlantedGraph& p = planted200();
  TestConfig cfg = config(11, 30);
  cfg.mode = Mode::kExhaustive;
  cfg.seed = 3;
  const auto out = sampled_rbst_tst(p.graph, cfg);
  expect_sound(p.graph, out, cfg);
  EXPECT_EQ(out.verdict, Verdict::kReject);
  EXPECT_EQ(out.trial_of_rejection, 0u);
}

TEST(SampledTester, PreconditionsAndErrors) {
  EXPECT_THROW(sampled_rbst_tst(star(6), config(1, 1)), AssumptionViolation);
  EXPECT_THROW(sampled_rbst_tst(complete(12), config(2, 4, 1)), std::invalid_argument);
  EXPECT_THROW(sampled_rbst_tst(complete(12), config(2, 0)), std::invalid_argument);
  EXPECT_THROW(sampled_rbst_tst(complete(12), config(2, 13)), std::invalid_argument);
}

TEST(SampledTester, DeterministicAcrossWorkers) {
  const PlantedGraph& p = planted200();
  for (Mode mode : {Mode::kRandom, Mode::kExhaustive}) {
    TestConfig cfg = config(11, 30);
    cfg.mode = mode;
    cfg.seed = 17;
    const auto one = sampled_rbst_tst(p.graph, cfg);
    cfg.workers = 8;
    EXPECT_EQ(sampled_rbst_tst(p.graph, cfg), one);
  }
  const Digraph k12 = complete(12);
  TestConfig cfg = config(2, 4);
  cfg.seed = 4;
  const auto one = sampled_rbst_tst(k12, cfg);
  cfg.workers = 8;
  EXPECT_EQ(sampled_rbst_tst(k12, cfg), one);
}

TEST(Amplification, Repeats) {
  EXPECT_EQ(amplification_repeats({1, 3}), 1u);
  EXPECT_EQ(amplification_repeats({1, 100}), 5u);
  EXPECT_EQ(amplification_repeats({5, 100}), 3u);
  EXPECT_EQ(amplification_repeats({1, 9}), 2u);
  EXPECT_EQ(amplification_repeats({1, 2}), 1u);
  EXPECT_THROW(amplification_repeats({0, 1}), std::invalid_argument);
  EXPECT_THROW(amplification_repeats({1, 1}), std::invalid_argument);
  // (1/3)^k <= sigma and k minimal.
  for (std::int64_t den = 2; den < 2000; den += 7) {
    const auto k = amplification_repeats({1, den});
    EXPECT_LE(std::pow(1.0 / 3.0, double(k)), 1.0 / double(den) * (1 + 1e-12));
    EXPECT_GT(std::pow(1.0 / 3.0, double(k - 1)), 1.0 / double(den));
  }
}

TEST(Amplification, SingleRunMatchesSubstream) {
  const PlantedGraph& p = planted200();
  TestConfig cfg = config(11, 30);
  cfg.seed = 99;
  auto amp = amplified_test(p.graph, cfg, {1, 3});
  TestConfig one = cfg;
  one.seed = run_seed(cfg.seed, 0);
  auto single = sampled_rbst_tst(p.graph, one);
  if (amp.verdict == Verdict::kReject) {
    EXPECT_EQ(amp.run_of_rejection, 0u);
    amp.run_of_rejection.reset();
  }
  EXPECT_EQ(amp, single);
}

TEST(Amplification, NeverRejectsRobustGraph) {
  const Digraph k12 = complete(12);
  TestConfig cfg = config(2, 4);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    cfg.seed = seed;
    EXPECT_EQ(amplified_test(k12, cfg, {1, 100}).verdict, Verdict::kAccept);
  }
}

TEST(Amplification, MoreRepeatsRejectMoreOften) {
  // Small partition budget makes a single run unreliable on the planted graph.
  const PlantedGraph& p = planted200();
  TestConfig cfg = config(11, 30);
  cfg.trials = 1;
  cfg.partitions_per_trial = 40;
  int once = 0, amplified = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    cfg.seed = seed;
    once += amplified_test(p.graph, cfg, {1, 3}).verdict == Verdict::kReject;
    const auto out = amplified_test(p.graph, cfg, {1, 1000});
    expect_sound(p.graph, out, cfg);
    amplified += out.verdict == Verdict::kReject;
  }
  EXPECT_GE(amplified, once);
  EXPECT_LT(once, 30);
}

TEST(Arbitrary, DegreeWitness) {
  const Digraph s = star(6);
  TestConfig cfg = config(1, 0);
  const auto out = test_arbitrary(s, cfg);
  EXPECT_EQ(out.verdict, Verdict::kReject);
  EXPECT_EQ(out.witness_kind, WitnessKind::kDegree);
  EXPECT_EQ(out.witness->a(), (VertexSet{1}));
  EXPECT_TRUE(out.witness->c().empty());
  EXPECT_EQ(out.witness_R, 2u);  // leaf reach 1, rest reach 1
  expect_sound(s, out, cfg);
}

TEST(Arbitrary, FallsThroughToSampler) {
  const PlantedGraph& p = planted200();
  EXPECT_EQ(min_in_degree(p.graph).degree, 79u);
  TestConfig cfg = config(11, 30);
  const auto out = test_arbitrary(p.graph, cfg);
  EXPECT_NE(out.witness_kind, WitnessKind::kDegree);
  const auto k12 = test_arbitrary(complete(12), config(2, 4));
  EXPECT_EQ(k12.verdict, Verdict::kAccept);
}

TEST(Soundness, RandomGraphsNeverGetInvalidWitness) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t n = 10 + seed % 4;
    const Digraph g = generate_uniform_digraph(n, 0.85, seed);
    const std::size_t d_min = min_in_degree(g).degree;
    for (std::size_t r = 1; 2 * r + 1 < d_min; ++r) {
      TestConfig cfg = config(r, 1, 6);
      cfg.seed = seed;
      cfg.mode = seed % 2 ? Mode::kRandom : Mode::kExhaustive;
      const auto out = sampled_rbst_tst(g, cfg);
      expect_sound(g, out, cfg);
      const bool robust_plus = exact_is_r_robust(g, r + 1).robust;
      if (robust_plus) { EXPECT_EQ(out.verdict, Verdict::kAccept); }
    }
  }
}
