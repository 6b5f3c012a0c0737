#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/partition.hpp"
#include "rrobust/rng.hpp"

namespace rrobust {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool in_open_unit() const { return den > 0 && num > 0 && num < den; }
};

/// Sample size guaranteeing both the sample-hit and the per-vertex estimation
/// bounds, with eps = delta_cap / n and fail_prob = delta:
///   t = ceil(max{(8/eps^2) ln(32/(eps delta)), (1/eps) ln(16/delta)}).
inline std::uint64_t sample_size(std::uint64_t delta_cap, std::uint64_t n, Rational fail_prob) {
  if (delta_cap == 0) throw std::invalid_argument("sample_size: delta_cap must be positive");
  if (delta_cap > n) throw std::invalid_argument("sample_size: delta_cap must not exceed n");
  if (!fail_prob.in_open_unit()) throw std::invalid_argument("sample_size: fail_prob must lie in (0, 1)");
  const double eps = static_cast<double>(delta_cap) / static_cast<double>(n);
  const double delta = fail_prob.value();
  const double estimation = 8.0 / (eps * eps) * std::log(32.0 / (eps * delta));
  const double hitting = 1.0 / eps * std::log(16.0 / delta);
  return static_cast<std::uint64_t>(std::ceil(std::max(estimation, hitting)));
}

/// t draws with replacement; support is sorted and multiplicity[i] counts
/// occurrences of support[i].
class SampleSet {
 public:
  SampleSet() = default;

  explicit SampleSet(std::vector<Vertex> draws) : draws_(std::move(draws)) {
    std::map<Vertex, std::uint32_t> counts;
    for (Vertex v : draws_) ++counts[v];
    for (auto [v, k] : counts) {
      support_.push_back(v);
      multiplicity_.push_back(k);
    }
  }

  const std::vector<Vertex>& draws() const noexcept { return draws_; }
  const std::vector<Vertex>& support() const noexcept { return support_; }
  const std::vector<std::uint32_t>& multiplicity() const noexcept { return multiplicity_; }
  std::size_t t() const noexcept { return draws_.size(); }

  /// Index of v in support(), or -1.
  std::ptrdiff_t index_of(Vertex v) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), v);
    return (it != support_.end() && *it == v) ? it - support_.begin() : -1;
  }

 private:
  std::vector<Vertex> draws_;
  std::vector<Vertex> support_;
  std::vector<std::uint32_t> multiplicity_;
};

inline SampleSet sample_vertices(std::size_t n, std::size_t t, Rng& rng) {
  if (n == 0) throw std::invalid_argument("sample_vertices: empty graph");
  if (t == 0) throw std::invalid_argument("sample_vertices: t must be positive");
  std::vector<Vertex> draws(t);
  for (auto& v : draws) v = static_cast<Vertex>(rng.below(n));
  return SampleSet(std::move(draws));
}

/// Block per support vertex, parallel to SampleSet::support(). All copies of
/// a drawn vertex share its block.
using SamplePartition = std::vector<Block>;

inline bool has_both_sides(const SamplePartition& part) {
  bool a = false, b = false;
  for (Block x : part) {
    a |= x == Block::kA;
    b |= x == Block::kB;
  }
  return a && b;
}

/// Sum of multiplicities of sampled in-neighbors of v whose block is in
/// `blocks`.
inline std::uint64_t weighted_block_count(const Digraph& g, Vertex v, const SampleSet& u,
                                          const SamplePartition& part, std::initializer_list<Block> blocks) {
  std::uint64_t count = 0;
  const auto& support = u.support();
  auto nb = g.in_neighbors(v);
  // Merge the two sorted lists.
  std::size_t i = 0, j = 0;
  while (i < support.size() && j < nb.size()) {
    if (support[i] < nb[j]) {
      ++i;
    } else if (nb[j] < support[i]) {
      ++j;
    } else {
      if (std::find(blocks.begin(), blocks.end(), part[i]) != blocks.end()) count += u.multiplicity()[i];
      ++i;
      ++j;
    }
  }
  return count;
}

/// Number of 3-partitions of s support vertices with both A and B nonempty:
/// 3^s - 2 * 2^s + 1.
inline std::uint64_t valid_partition_count(std::size_t s) {
  std::uint64_t p3 = 1, p2 = 1;
  for (std::size_t i = 0; i < s; ++i) {
    p3 *= 3;
    p2 *= 2;
  }
  return p3 - 2 * p2 + 1;
}

/// Exhaustive iteration over block assignments of the support in ascending
/// ternary order (digit i is support vertex i; C=0, A=1, B=2), skipping
/// those with an empty A or B side.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(std::size_t support_size) : size_(support_size), total_(1) {
    if (support_size > kMaxSupport)
      throw std::length_error("partition enumeration over " + std::to_string(support_size) +
                              " support vertices is infeasible (limit " + std::to_string(kMaxSupport) + ")");
    for (std::size_t i = 0; i < support_size; ++i) total_ *= 3;
  }

  static constexpr std::size_t kMaxSupport = 20;

  /// Number of raw assignments, 3^s.
  std::uint64_t assignments() const noexcept { return total_; }

  /// Decodes a raw ternary index.
  SamplePartition at(std::uint64_t index) const {
    SamplePartition part(size_);
    for (auto& x : part) {
      x = static_cast<Block>(index % 3);
      index /= 3;
    }
    return part;
  }

  /// Advances to the next valid partition; false when exhausted.
  bool next(SamplePartition& out) {
    while (index_ < total_) {
      out = at(index_++);
      if (has_both_sides(out)) return true;
    }
    return false;
  }

 private:
  std::size_t size_;
  std::uint64_t total_;
  std::uint64_t index_ = 0;
};

inline std::vector<SamplePartition> enumerate_partitions(const SampleSet& u) {
  if (u.support().empty()) throw std::invalid_argument("enumerate_partitions: empty sample");
  PartitionEnumerator it(u.support().size());
  std::vector<SamplePartition> out;
  SamplePartition p;
  while (it.next(p)) out.push_back(p);
  return out;
}

/// Uniform independent block per support vertex, redrawn until both A and B
/// are nonempty.
inline SamplePartition random_partition(const SampleSet& u, Rng& rng) {
  if (u.support().size() < 2) throw std::invalid_argument("random_partition: support must have at least 2 vertices");
  SamplePartition part(u.support().size());
  do {
    for (auto& x : part) x = static_cast<Block>(rng.below(3));
  } while (!has_both_sides(part));
  return part;
}

}  // namespace rrobust
