#pragma once

// Brute-force r-robustness for small digraphs.
//
// Every ordered pair (A, B) of nonempty disjoint sets is visited as a ternary
// assignment of vertices to C/A/B (digits 0/1/2, vertex 0 least significant).
// Swapping A and B gives the same check, so only assignments whose lowest
// non-C vertex lies in A are examined. A set's reach index depends on the set
// alone and is tabulated once over all 2^n subsets.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/parallel.hpp"
#include "rrobust/partition.hpp"

namespace rrobust {

class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct ExactOptions {
  std::size_t max_n = 13;
  unsigned workers = 1;
};

struct ExactResult {
  bool robust = true;
  std::optional<TriPartition> witness;
};

namespace detail {

// Absolute ceiling regardless of options: the subset table has 2^n entries.
inline constexpr std::size_t kExactHardLimit = 26;

class SubsetTable {
 public:
  SubsetTable(const Digraph& g, const ExactOptions& opts) : n_(g.num_vertices()) {
    if (n_ < 2) throw std::invalid_argument("exact oracle: need at least two vertices");
    if (n_ > opts.max_n || n_ > kExactHardLimit)
      throw SizeGuardError("exact oracle: n = " + std::to_string(n_) + " exceeds size guard " +
                           std::to_string(std::min(opts.max_n, kExactHardLimit)));
    std::vector<std::uint32_t> in_mask(n_, 0);
    for (Vertex v = 0; v < n_; ++v)
      for (Vertex u : g.in_neighbors(v)) in_mask[v] |= std::uint32_t{1} << u;
    const std::uint32_t full = (n_ == 32) ? ~0u : ((std::uint32_t{1} << n_) - 1);
    reach_.assign(std::size_t{1} << n_, 0);
    for (std::uint32_t s = 1; s <= full; ++s) {
      const std::uint32_t outside = ~s & full;
      std::uint8_t best = 0;
      for (std::uint32_t rest = s; rest; rest &= rest - 1) {
        const auto u = static_cast<unsigned>(std::countr_zero(rest));
        best = std::max<std::uint8_t>(best, static_cast<std::uint8_t>(std::popcount(in_mask[u] & outside)));
      }
      reach_[s] = best;
    }
  }

  std::size_t n() const noexcept { return n_; }
  std::uint8_t reach(std::uint32_t s) const { return reach_[s]; }

 private:
  std::size_t n_;
  std::vector<std::uint8_t> reach_;
};

inline std::uint64_t pow3(std::size_t k) {
  std::uint64_t x = 1;
  while (k--) x *= 3;
  return x;
}

// Walks assignments in ascending ternary index. The low `low_digits`
// vertices form the inner odometer; a block index fixes the remaining ones.
// visit(index, a_mask, b_mask) returns true to stop.
class TernaryWalker {
 public:
  explicit TernaryWalker(std::size_t n) : n_(n), low_(std::min<std::size_t>(n, 7)) {}

  std::uint64_t blocks() const { return pow3(n_ - low_); }

  template <typename Visit>
  std::optional<std::uint64_t> walk_block(std::uint64_t block, Visit&& visit) const {
    std::uint32_t hi_a = 0, hi_b = 0;
    std::uint64_t rest = block;
    for (std::size_t v = low_; v < n_; ++v) {
      const auto digit = rest % 3;
      rest /= 3;
      if (digit == 1) hi_a |= std::uint32_t{1} << v;
      if (digit == 2) hi_b |= std::uint32_t{1} << v;
    }
    const std::uint64_t base = block * pow3(low_);
    std::uint8_t digits[32] = {};
    std::uint32_t lo_a = 0, lo_b = 0;
    const std::uint64_t span = pow3(low_);
    for (std::uint64_t i = 0; i < span; ++i) {
      if (i > 0) {
        for (std::size_t d = 0; d < low_; ++d) {
          const std::uint32_t bit = std::uint32_t{1} << d;
          if (digits[d] == 2) {
            digits[d] = 0;
            lo_b &= ~bit;
            continue;
          }
          if (digits[d]++ == 0) {
            lo_a |= bit;
          } else {
            lo_a &= ~bit;
            lo_b |= bit;
          }
          break;
        }
      }
      const std::uint32_t a = hi_a | lo_a, b = hi_b | lo_b;
      if (a == 0 || b == 0) continue;
      const std::uint32_t lowest = (a | b) & (~(a | b) + 1);
      if ((lowest & a) == 0) continue;
      if (visit(base + i, a, b)) return base + i;
    }
    return std::nullopt;
  }

 private:
  std::size_t n_;
  std::size_t low_;
};

inline TriPartition partition_from_masks(std::size_t n, std::uint32_t a, std::uint32_t b) {
  std::vector<Block> labels(n, Block::kC);
  for (std::size_t v = 0; v < n; ++v) {
    if (a >> v & 1u) labels[v] = Block::kA;
    if (b >> v & 1u) labels[v] = Block::kB;
  }
  return TriPartition(std::move(labels));
}

// First violating pair in ternary order, where `violates(a, b)` decides.
template <typename Violates>
ExactResult find_violation(const SubsetTable& table, unsigned workers, Violates&& violates) {
  TernaryWalker walker(table.n());
  auto hit = first_hit(walker.blocks(), workers, [&](unsigned, std::uint64_t block) {
    return walker.walk_block(block, [&](std::uint64_t, std::uint32_t a, std::uint32_t b) { return violates(a, b); })
        .has_value();
  });
  if (!hit) return {true, std::nullopt};
  ExactResult out{false, std::nullopt};
  walker.walk_block(*hit, [&](std::uint64_t, std::uint32_t a, std::uint32_t b) {
    if (!violates(a, b)) return false;
    out.witness = partition_from_masks(table.n(), a, b);
    return true;
  });
  return out;
}

}  // namespace detail

/// True iff every pair of nonempty disjoint sets has an r-reachable member.
/// On failure the witness is the violating (A, B, V\(A u B)) with the
/// smallest ternary index.
inline ExactResult exact_is_r_robust(const Digraph& g, std::size_t r, const ExactOptions& opts = {}) {
  detail::SubsetTable table(g, opts);
  return detail::find_violation(table, opts.workers, [&](std::uint32_t a, std::uint32_t b) {
    return table.reach(a) < r && table.reach(b) < r;
  });
}

/// Largest r such that g is r-robust: the minimum over disjoint pairs of
/// max(reach_index(A), reach_index(B)).
inline std::size_t exact_max_robustness(const Digraph& g, const ExactOptions& opts = {}) {
  detail::SubsetTable table(g, opts);
  detail::TernaryWalker walker(table.n());
  std::size_t best = table.n();
  for (std::uint64_t block = 0; block < walker.blocks() && best > 0; ++block) {
    walker.walk_block(block, [&](std::uint64_t, std::uint32_t a, std::uint32_t b) {
      best = std::min<std::size_t>(best, std::max(table.reach(a), table.reach(b)));
      return best == 0;
    });
  }
  return best;
}

/// r-robustness restricted to pairs with min(|A|, |B|) >= beta * n, where
/// beta = beta_num / beta_den must lie in [1/n, 1].
inline bool exact_is_beta_close_robust(const Digraph& g, std::size_t r, std::uint64_t beta_num,
                                       std::uint64_t beta_den, const ExactOptions& opts = {}) {
  const std::uint64_t n = g.num_vertices();
  if (beta_den == 0 || beta_num > beta_den || beta_num * n < beta_den)
    throw std::invalid_argument("beta must lie in [1/n, 1]");
  detail::SubsetTable table(g, opts);
  return detail::find_violation(table, opts.workers, [&](std::uint32_t a, std::uint32_t b) {
           const std::uint64_t smaller = std::min(std::popcount(a), std::popcount(b));
           return smaller * beta_den >= beta_num * n && table.reach(a) < r && table.reach(b) < r;
         })
      .robust;
}

}  // namespace rrobust
