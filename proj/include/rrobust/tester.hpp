#pragma once

// Sample-based approximate r-robustness tester.
//
// For each 3-partition of a vertex sample U, the pipeline
//   restrict_to_partition -> move_pass -> test_reach
// builds a partition (A', B', C') of all vertices. If neither A' nor B' is
// (r + delta_cap)-reachable the graph is rejected with that partition as a
// witness; the witness can be checked independently, so a rejection is never
// wrong. A graph that is not r-robust is rejected with probability at least
// 1 - fail_prob when t is at least sample_size().
//
// With p = r/n and eps = delta_cap/n the three thresholds are evaluated in
// integers:
//   restrict:   count/t > p + eps/4       <=>  4 n count > (4r + delta_cap) t
//   move:       count > pn + 3 eps n / 4  <=>  4 count > 4r + 3 delta_cap
//   test_reach: count >= pn + eps n       <=>  count >= r + delta_cap

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/parallel.hpp"
#include "rrobust/partition.hpp"
#include "rrobust/rng.hpp"
#include "rrobust/sampling.hpp"

namespace rrobust {

enum class Mode { kExhaustive, kRandom };

inline const char* to_string(Mode m) { return m == Mode::kExhaustive ? "exhaustive" : "random"; }

struct TestConfig {
  std::size_t r = 1;
  std::size_t delta_cap = 1;
  Rational fail_prob{1, 3};
  std::size_t t = 9;
  Mode mode = Mode::kRandom;
  // Random mode: independent samples, each searched with up to
  // partitions_per_trial random partitions (default 3^|support|).
  std::size_t trials = 3;
  std::optional<std::uint64_t> partitions_per_trial;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

inline void validate(const TestConfig& cfg, std::size_t n) {
  if (cfg.r == 0) throw std::invalid_argument("r must be positive");
  if (cfg.delta_cap == 0 || cfg.delta_cap > n) throw std::invalid_argument("delta must satisfy 0 < delta <= n");
  if (!cfg.fail_prob.in_open_unit()) throw std::invalid_argument("failure probability must lie in (0, 1)");
  if (cfg.t < 2) throw std::invalid_argument("sample size t must be at least 2");
  if (cfg.mode == Mode::kRandom && cfg.trials == 0) throw std::invalid_argument("trials must be positive");
  if (cfg.partitions_per_trial && *cfg.partitions_per_trial == 0)
    throw std::invalid_argument("partitions per trial must be positive");
}

/// Sample size carrying the accept/reject guarantee for this configuration.
inline std::size_t guaranteed_t(const TestConfig& cfg, std::size_t n) {
  return sample_size(cfg.delta_cap, n, cfg.fail_prob);
}

class AssumptionViolation : public std::domain_error {
 public:
  AssumptionViolation(Vertex v, std::size_t d_min, std::size_t bound)
      : std::domain_error("minimum in-degree " + std::to_string(d_min) + " (vertex " + std::to_string(v) +
                          ") does not exceed 2r+delta = " + std::to_string(bound) +
                          "; use the arbitrary-digraph test instead"),
        vertex_(v),
        d_min_(d_min) {}

  Vertex vertex() const noexcept { return vertex_; }
  std::size_t d_min() const noexcept { return d_min_; }

 private:
  Vertex vertex_;
  std::size_t d_min_;
};

namespace thresholds {

using Wide = unsigned __int128;

inline bool restrict_exceeds(std::uint64_t count, std::uint64_t n, std::uint64_t r, std::uint64_t delta_cap,
                             std::uint64_t t) {
  return Wide{4} * n * count > (Wide{4} * r + delta_cap) * t;
}

inline bool move_exceeds(std::uint64_t count, std::uint64_t r, std::uint64_t delta_cap) {
  return Wide{4} * count > Wide{4} * r + Wide{3} * delta_cap;
}

inline bool reach_meets(std::uint64_t count, std::uint64_t r, std::uint64_t delta_cap) {
  return Wide{count} >= Wide{r} + delta_cap;
}

}  // namespace thresholds

// ---------------------------------------------------------------------------
// Pipeline stages

/// Sampled in-neighbors of every vertex, as indices into the sample support.
class SampleIndex {
 public:
  SampleIndex(const Digraph& g, const SampleSet& u) : offsets_(g.num_vertices() + 1, 0), pos_(g.num_vertices(), -1) {
    for (std::size_t i = 0; i < u.support().size(); ++i) pos_[u.support()[i]] = static_cast<std::int32_t>(i);
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
      for (Vertex w : g.in_neighbors(v))
        if (pos_[w] >= 0) hits_.push_back(static_cast<std::uint32_t>(pos_[w]));
      offsets_[v + 1] = hits_.size();
    }
  }

  bool in_sample(Vertex v) const { return pos_[v] >= 0; }
  std::int32_t position(Vertex v) const { return pos_[v]; }
  std::span<const std::uint32_t> hits(Vertex v) const {
    return {hits_.data() + offsets_[v], hits_.data() + offsets_[v + 1]};
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> hits_;
  std::vector<std::int32_t> pos_;
};

namespace detail {

inline void restrict_into(const Digraph& g, const SampleSet& u, const SampleIndex& index, const SamplePartition& part,
                          const TestConfig& cfg, std::vector<Block>& labels) {
  const std::size_t n = g.num_vertices();
  labels.resize(n);
  const auto& mult = u.multiplicity();
  for (Vertex v = 0; v < n; ++v) {
    if (const auto pos = index.position(v); pos >= 0) {
      labels[v] = part[static_cast<std::size_t>(pos)];
      continue;
    }
    std::uint64_t in_ac = 0, in_bc = 0;
    for (std::uint32_t i : index.hits(v)) {
      if (part[i] != Block::kB) in_ac += mult[i];
      if (part[i] != Block::kA) in_bc += mult[i];
    }
    const bool ac = thresholds::restrict_exceeds(in_ac, n, cfg.r, cfg.delta_cap, u.t());
    const bool bc = thresholds::restrict_exceeds(in_bc, n, cfg.r, cfg.delta_cap, u.t());
    if (ac && bc) {
      labels[v] = Block::kC;
    } else if (ac) {
      labels[v] = Block::kA;
    } else if (bc) {
      labels[v] = Block::kB;
    } else {
      labels[v] = Block::kC;  // free choice; fixed for reproducibility
    }
  }
}

// Conditions read `frozen`, moves are written to `out`.
inline void move_into(const Digraph& g, const SampleIndex& index, const std::vector<Block>& frozen,
                      const TestConfig& cfg, bool practical, std::vector<Block>& out) {
  out = frozen;
  std::size_t size_a = 0, size_b = 0;
  for (Block x : out) {
    size_a += x == Block::kA;
    size_b += x == Block::kB;
  }
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const Block from = frozen[v];
    if (from == Block::kC || (!practical && index.in_sample(v))) continue;
    std::uint64_t in_a = 0, in_b = 0;
    auto nb = g.in_neighbors(v);
    for (Vertex w : nb) {
      in_a += frozen[w] == Block::kA;
      in_b += frozen[w] == Block::kB;
    }
    const std::uint64_t outside_a = nb.size() - in_a;  // |N(v) n (B' u C')|
    const std::uint64_t outside_b = nb.size() - in_b;  // |N(v) n (A' u C')|
    Block to = from;
    if (from == Block::kA && thresholds::move_exceeds(outside_a, cfg.r, cfg.delta_cap)) {
      to = thresholds::move_exceeds(outside_b, cfg.r, cfg.delta_cap) ? Block::kC : Block::kB;
    } else if (from == Block::kB && thresholds::move_exceeds(outside_b, cfg.r, cfg.delta_cap)) {
      to = thresholds::move_exceeds(outside_a, cfg.r, cfg.delta_cap) ? Block::kC : Block::kA;
    }
    if (to == from) continue;
    if (practical && ((from == Block::kA && size_a == 1) || (from == Block::kB && size_b == 1))) continue;
    out[v] = to;
    size_a += (to == Block::kA) - (from == Block::kA);
    size_b += (to == Block::kB) - (from == Block::kB);
  }
}

struct ReachSummary {
  bool reachable = true;  // test_reach result: 1 means no refutation
  std::size_t violation = 0;  // 1 + max reach index of A and B, when both nonempty
};

inline ReachSummary summarize_reach(const Digraph& g, const std::vector<Block>& labels, const TestConfig& cfg) {
  std::size_t max_a = 0, max_b = 0;
  bool has_a = false, has_b = false;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    const Block side = labels[v];
    if (side == Block::kC) continue;
    std::size_t inside = 0;
    auto nb = g.in_neighbors(v);
    for (Vertex w : nb) inside += labels[w] == side;
    const std::size_t outside = nb.size() - inside;
    if (side == Block::kA) {
      has_a = true;
      max_a = std::max(max_a, outside);
    } else {
      has_b = true;
      max_b = std::max(max_b, outside);
    }
  }
  if (!has_a || !has_b) return {true, 0};
  const bool reachable =
      thresholds::reach_meets(max_a, cfg.r, cfg.delta_cap) || thresholds::reach_meets(max_b, cfg.r, cfg.delta_cap);
  return {reachable, 1 + std::max(max_a, max_b)};
}

}  // namespace detail

/// Assigns every unsampled vertex by comparing its sampled in-neighbor counts
/// in U_A u U_C and U_B u U_C against the restrict threshold. Sampled
/// vertices keep their blocks; vertices passing neither test go to C.
inline TriPartition restrict_to_partition(const Digraph& g, const SampleSet& u, const SamplePartition& part,
                                          const TestConfig& cfg) {
  if (part.size() != u.support().size()) throw std::invalid_argument("restrict: partition does not match sample");
  if (!has_both_sides(part)) throw std::invalid_argument("restrict: U_A and U_B must be nonempty");
  std::vector<Block> labels;
  detail::restrict_into(g, u, SampleIndex(g, u), part, cfg, labels);
  return TriPartition(std::move(labels));
}

/// One correction pass. A vertex of A' with more than the move threshold of
/// in-neighbors in B' u C' leaves A' (to C'' if it also exceeds the threshold
/// towards A' u C', else to B''); symmetrically for B'. All counts are taken
/// against the input partition. The pass skips sampled vertices unless
/// `practical`, in which case it visits all vertices but never empties A''
/// or B''.
inline TriPartition move_pass(const Digraph& g, const TriPartition& part, const SampleSet& u, const TestConfig& cfg,
                              bool practical) {
  if (part.size() != g.num_vertices()) throw std::invalid_argument("move_pass: partition size mismatch");
  std::vector<Block> out;
  detail::move_into(g, SampleIndex(g, u), part.labels(), cfg, practical, out);
  return TriPartition(std::move(out));
}

/// True when A' or B' is (r + delta_cap)-reachable, i.e. no refutation. An
/// empty side also yields true.
inline bool test_reach(const Digraph& g, const TriPartition& part, const TestConfig& cfg) {
  if (part.size() != g.num_vertices()) throw std::invalid_argument("test_reach: partition size mismatch");
  return detail::summarize_reach(g, part.labels(), cfg).reachable;
}

// ---------------------------------------------------------------------------
// Drivers

enum class Verdict { kAccept, kReject };
enum class WitnessKind { kNone, kSampled, kDegree };

inline const char* to_string(Verdict v) { return v == Verdict::kAccept ? "accept" : "reject"; }
inline const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::kNone: return "none";
    case WitnessKind::kSampled: return "sampled";
    case WitnessKind::kDegree: return "degree";
  }
  return "none";
}

struct TestOutcome {
  Verdict verdict = Verdict::kAccept;
  std::optional<TriPartition> witness;
  std::optional<std::size_t> witness_R;
  WitnessKind witness_kind = WitnessKind::kNone;
  std::uint64_t partitions_examined = 0;
  std::optional<std::size_t> trial_of_rejection;
  std::optional<std::size_t> run_of_rejection;
  // Smallest violation number over all examined partitions (equals witness_R
  // on rejection). Useful for reporting how close an accepting search came.
  std::optional<std::size_t> best_R;

  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

namespace detail {

struct Workspace {
  std::vector<Block> restricted;
  std::vector<Block> moved;
  std::size_t best_R = std::numeric_limits<std::size_t>::max();
};

inline ReachSummary run_pipeline(const Digraph& g, const SampleSet& u, const SampleIndex& index,
                                 const SamplePartition& part, const TestConfig& cfg, bool practical, Workspace& ws) {
  restrict_into(g, u, index, part, cfg, ws.restricted);
  move_into(g, index, ws.restricted, cfg, practical, ws.moved);
  auto summary = summarize_reach(g, ws.moved, cfg);
  if (summary.violation > 0) ws.best_R = std::min(ws.best_R, summary.violation);
  return summary;
}

struct SearchResult {
  std::optional<std::uint64_t> hit;
  std::optional<TriPartition> witness;
  std::size_t witness_R = 0;
  std::size_t best_R = std::numeric_limits<std::size_t>::max();
};

// Evaluates partitions make_part(i) for i in [0, count); partitions for which
// make_part returns false are skipped.
template <typename MakePart>
SearchResult search(const Digraph& g, const SampleSet& u, const TestConfig& cfg, bool practical,
                    std::uint64_t count, MakePart&& make_part) {
  const SampleIndex index(g, u);
  const unsigned workers = std::max(1u, cfg.workers);
  std::vector<Workspace> spaces(workers);
  std::vector<SamplePartition> parts(workers);
  SearchResult out;
  out.hit = first_hit(count, workers, [&](unsigned w, std::uint64_t i) {
    if (!make_part(i, parts[w])) return false;
    return !run_pipeline(g, u, index, parts[w], cfg, practical, spaces[w]).reachable;
  });
  if (out.hit) {
    Workspace ws;
    SamplePartition part;
    make_part(*out.hit, part);
    const auto summary = run_pipeline(g, u, index, part, cfg, practical, ws);
    out.witness = TriPartition(ws.moved);
    out.witness_R = summary.violation;
    out.best_R = summary.violation;
  } else {
    for (const auto& ws : spaces) out.best_R = std::min(out.best_R, ws.best_R);
  }
  return out;
}

inline void note_best(TestOutcome& outcome, std::size_t best) {
  if (best == std::numeric_limits<std::size_t>::max()) return;
  outcome.best_R = outcome.best_R ? std::min(*outcome.best_R, best) : best;
}

inline std::uint64_t pow3_saturating(std::size_t k) {
  std::uint64_t x = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (x > std::numeric_limits<std::uint64_t>::max() / 3) return std::numeric_limits<std::uint64_t>::max();
    x *= 3;
  }
  return x;
}

}  // namespace detail

/// Seed of the sample drawn in a given trial (exhaustive mode uses trial 0).
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return substream_seed(seed, trial); }

/// Throws AssumptionViolation unless d_min > 2r + delta_cap.
inline void require_min_degree(const Digraph& g, const TestConfig& cfg) {
  if (auto v = exam_degree(g, cfg.r, cfg.delta_cap))
    throw AssumptionViolation(*v, g.in_degree(*v), 2 * cfg.r + cfg.delta_cap);
}

/// Samples U and searches 3-partitions of it for a refutation of
/// (r + delta_cap)-robustness.
///
/// Exhaustive mode draws one sample and visits every partition in ternary
/// order with the move pass restricted to unsampled vertices. Random mode
/// draws `trials` samples; each is searched with random partitions and the
/// practical move pass. The reported rejection is always the lowest-indexed
/// one, so the outcome is independent of the worker count.
inline TestOutcome sampled_rbst_tst(const Digraph& g, const TestConfig& cfg) {
  const std::size_t n = g.num_vertices();
  validate(cfg, n);
  require_min_degree(g, cfg);

  TestOutcome outcome;
  auto reject = [&](detail::SearchResult& res) {
    outcome.verdict = Verdict::kReject;
    outcome.witness = std::move(res.witness);
    outcome.witness_R = res.witness_R;
    outcome.witness_kind = WitnessKind::kSampled;
    outcome.best_R = res.witness_R;
  };

  if (cfg.mode == Mode::kExhaustive) {
    Rng rng(trial_seed(cfg.seed, 0));
    const SampleSet u = sample_vertices(n, cfg.t, rng);
    const PartitionEnumerator parts(u.support().size());
    auto res = detail::search(g, u, cfg, false, parts.assignments(), [&](std::uint64_t i, SamplePartition& out) {
      out = parts.at(i);
      return has_both_sides(out);
    });
    if (res.hit) {
      for (std::uint64_t i = 0; i <= *res.hit; ++i) outcome.partitions_examined += has_both_sides(parts.at(i));
      outcome.trial_of_rejection = 0;
      reject(res);
    } else {
      outcome.partitions_examined = valid_partition_count(u.support().size());
      detail::note_best(outcome, res.best_R);
    }
    return outcome;
  }

  for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
    const std::uint64_t seed = trial_seed(cfg.seed, trial);
    Rng rng(seed);
    const SampleSet u = sample_vertices(n, cfg.t, rng);
    if (u.support().size() < 2) continue;
    const std::uint64_t budget =
        cfg.partitions_per_trial.value_or(detail::pow3_saturating(u.support().size()));
    auto res = detail::search(g, u, cfg, true, budget, [&](std::uint64_t i, SamplePartition& out) {
      Rng part_rng(substream_seed(seed, i + 1));
      out = random_partition(u, part_rng);
      return true;
    });
    if (res.hit) {
      outcome.partitions_examined += *res.hit + 1;
      outcome.trial_of_rejection = trial;
      reject(res);
      return outcome;
    }
    outcome.partitions_examined += budget;
    detail::note_best(outcome, res.best_R);
  }
  return outcome;
}

/// Smallest k with (1/3)^k <= sigma, i.e. ceil(ln(1/sigma) / ln 3).
inline std::size_t amplification_repeats(Rational sigma) {
  if (!sigma.in_open_unit()) throw std::invalid_argument("sigma must lie in (0, 1)");
  std::size_t k = 0;
  // 3^k * num >= den, in exact integers.
  unsigned __int128 lhs = static_cast<unsigned __int128>(sigma.num);
  while (lhs < static_cast<unsigned __int128>(sigma.den)) {
    lhs *= 3;
    ++k;
  }
  return k;
}

/// Seed of run `run` in an amplified test.
inline std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) {
  return substream_seed(seed ^ 0x5DEECE66DULL, run);
}

/// Repeats the tester with fail_prob 1/3 until overall failure probability
/// sigma is reached; rejects on the first rejecting run.
inline TestOutcome amplified_test(const Digraph& g, const TestConfig& cfg, Rational sigma) {
  const std::size_t repeats = amplification_repeats(sigma);
  TestOutcome total;
  for (std::size_t run = 0; run < repeats; ++run) {
    TestConfig run_cfg = cfg;
    run_cfg.fail_prob = {1, 3};
    run_cfg.seed = run_seed(cfg.seed, run);
    TestOutcome one = sampled_rbst_tst(g, run_cfg);
    total.partitions_examined += one.partitions_examined;
    if (one.best_R) detail::note_best(total, *one.best_R);
    if (one.verdict == Verdict::kReject) {
      one.partitions_examined = total.partitions_examined;
      one.best_R = one.witness_R;
      one.run_of_rejection = run;
      return one;
    }
  }
  return total;
}

namespace detail {

// Only r > 0 is needed here; delta_cap = 0 is meaningful for the degree check.
inline std::optional<TestOutcome> degree_reject(const Digraph& g, const TestConfig& cfg) {
  if (cfg.r == 0) throw std::invalid_argument("r must be positive");
  auto v = exam_degree(g, cfg.r, cfg.delta_cap);
  if (!v) return std::nullopt;
  TestOutcome out;
  out.verdict = Verdict::kReject;
  VertexSet rest;
  for (Vertex w = 0; w < g.num_vertices(); ++w)
    if (w != *v) rest.push_back(w);
  out.witness = TriPartition::from_sets(g.num_vertices(), {*v}, rest);
  out.witness_R = violation_number(g, *out.witness);
  out.best_R = out.witness_R;
  out.witness_kind = WitnessKind::kDegree;
  return out;
}

}  // namespace detail

/// Tester for digraphs without the minimum-degree assumption. A vertex of
/// in-degree at most 2r + delta_cap yields an immediate rejection with
/// witness ({v}, V\{v}, {}), refuting (2r+delta_cap+1)-robustness; otherwise
/// the sampled tester decides.
inline TestOutcome test_arbitrary(const Digraph& g, const TestConfig& cfg) {
  if (auto out = detail::degree_reject(g, cfg)) return *out;
  return sampled_rbst_tst(g, cfg);
}

/// test_arbitrary with amplification of the sampled part.
inline TestOutcome amplified_arbitrary(const Digraph& g, const TestConfig& cfg, Rational sigma) {
  if (auto out = detail::degree_reject(g, cfg)) return *out;
  return amplified_test(g, cfg, sigma);
}

/// Independent check of a rejection. Sampled witnesses must have neither side
/// (r + delta_cap)-reachable; degree witnesses neither side
/// (2r + delta_cap + 1)-reachable. witness_R must match the witness.
inline bool verify_rejection(const Digraph& g, const TestOutcome& out, const TestConfig& cfg) {
  if (out.verdict != Verdict::kReject) return !out.witness && !out.witness_R;
  if (!out.witness || !out.witness_R || out.witness->size() != g.num_vertices()) return false;
  const auto a = out.witness->a(), b = out.witness->b();
  if (a.empty() || b.empty()) return false;
  const std::size_t level =
      out.witness_kind == WitnessKind::kDegree ? 2 * cfg.r + cfg.delta_cap + 1 : cfg.r + cfg.delta_cap;
  if (is_r_reachable(g, a, level) || is_r_reachable(g, b, level)) return false;
  return *out.witness_R == 1 + std::max(reach_index(g, a), reach_index(g, b));
}

}  // namespace rrobust
