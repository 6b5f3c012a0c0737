#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"

namespace rrobust {

enum class Block : std::uint8_t { kC = 0, kA = 1, kB = 2 };

inline char block_name(Block b) {
  switch (b) {
    case Block::kA: return 'A';
    case Block::kB: return 'B';
    case Block::kC: return 'C';
  }
  return '?';
}

/// Disjoint (A, B, C) covering 0..n-1, stored as one label per vertex.
/// A valid partition has A and B nonempty; the label form makes the
/// disjoint-cover part structural.
class TriPartition {
 public:
  TriPartition() = default;
  explicit TriPartition(std::vector<Block> labels) : labels_(std::move(labels)) {}

  static TriPartition from_sets(std::size_t n, const VertexSet& a, const VertexSet& b) {
    std::vector<Block> labels(n, Block::kC);
    auto put = [&](const VertexSet& s, Block blk) {
      for (Vertex v : s) {
        if (v >= n) throw std::out_of_range("TriPartition: vertex " + std::to_string(v) + " out of range");
        if (labels[v] != Block::kC) throw std::invalid_argument("TriPartition: A and B overlap");
        labels[v] = blk;
      }
    };
    put(a, Block::kA);
    put(b, Block::kB);
    return TriPartition(std::move(labels));
  }

  std::size_t size() const noexcept { return labels_.size(); }
  Block operator[](Vertex v) const { return labels_[v]; }
  const std::vector<Block>& labels() const noexcept { return labels_; }

  VertexSet members(Block blk) const {
    VertexSet out;
    for (Vertex v = 0; v < labels_.size(); ++v)
      if (labels_[v] == blk) out.push_back(v);
    return out;
  }
  VertexSet a() const { return members(Block::kA); }
  VertexSet b() const { return members(Block::kB); }
  VertexSet c() const { return members(Block::kC); }

  std::size_t count(Block blk) const {
    std::size_t k = 0;
    for (Block x : labels_) k += x == blk;
    return k;
  }

  bool valid() const { return count(Block::kA) > 0 && count(Block::kB) > 0; }

  friend bool operator==(const TriPartition&, const TriPartition&) = default;

 private:
  std::vector<Block> labels_;
};

/// Per-vertex in-neighbor counts by block of a partition.
struct BlockCounts {
  std::vector<std::uint32_t> in_a;
  std::vector<std::uint32_t> in_b;

  void compute(const Digraph& g, const std::vector<Block>& labels) {
    const std::size_t n = g.num_vertices();
    in_a.assign(n, 0);
    in_b.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
      std::uint32_t ka = 0, kb = 0;
      for (Vertex u : g.in_neighbors(v)) {
        ka += labels[u] == Block::kA;
        kb += labels[u] == Block::kB;
      }
      in_a[v] = ka;
      in_b[v] = kb;
    }
  }
};

/// Smallest R such that neither A nor B is R-reachable:
/// 1 + max(reach_index(A), reach_index(B)). Requires a valid partition.
inline std::size_t violation_number(const Digraph& g, const TriPartition& p) {
  if (!p.valid()) throw std::invalid_argument("violation_number: A and B must be nonempty");
  return 1 + std::max(reach_index(g, p.a()), reach_index(g, p.b()));
}

}  // namespace rrobust
