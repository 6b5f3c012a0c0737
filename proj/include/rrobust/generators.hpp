#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rrobust/digraph.hpp"
#include "rrobust/partition.hpp"
#include "rrobust/rng.hpp"

namespace rrobust {

struct PlantedSpec {
  std::size_t n = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;
  std::size_t rbar = 1;
  std::uint64_t seed = 0;
};

struct PlantedGraph {
  Digraph graph;
  TriPartition truth;
  std::size_t rbar = 0;
};

inline void validate(const PlantedSpec& spec) {
  if (spec.rbar < 1) throw std::invalid_argument("planted: rbar must be at least 1");
  if (spec.size_a + spec.size_b > spec.n) throw std::invalid_argument("planted: |A| + |B| exceeds n");
  const std::size_t size_c = spec.n - spec.size_a - spec.size_b;
  if (std::min({spec.size_a, spec.size_b, size_c}) < 2 * spec.rbar)
    throw std::invalid_argument("planted: min(|A|, |B|, |C|) must be at least 2 rbar");
}

/// Draws k distinct elements of `pool` uniformly (partial Fisher-Yates).
inline std::vector<Vertex> choose_distinct(std::vector<Vertex> pool, std::size_t k, Rng& rng) {
  if (k > pool.size()) throw std::invalid_argument("choose_distinct: pool too small");
  for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
  pool.resize(k);
  return pool;
}

inline std::vector<Vertex> random_permutation(std::size_t n, Rng& rng) {
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  return perm;
}

/// Planted-partition digraph that is rbar-robust but not (rbar+1)-robust.
///
/// A, B, C are complete digraphs. Every u in A receives edges from rbar
/// distinct random vertices of B u C, every u in B from rbar of A u C, and
/// every vertex of C receives edges from all of A u B. Each u in A (and B)
/// then has exactly rbar in-neighbors outside its own set. Labels are
/// shuffled and the ground-truth partition is returned in shuffled labels.
inline PlantedGraph generate_planted(const PlantedSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  const Vertex a_end = static_cast<Vertex>(spec.size_a);
  const Vertex b_end = static_cast<Vertex>(spec.size_a + spec.size_b);
  auto block_of = [&](Vertex v) { return v < a_end ? Block::kA : v < b_end ? Block::kB : Block::kC; };

  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v && block_of(u) == block_of(v)) edges.push_back({u, v});

  std::vector<Vertex> not_a, not_b;
  for (Vertex v = 0; v < n; ++v) {
    if (block_of(v) != Block::kA) not_a.push_back(v);
    if (block_of(v) != Block::kB) not_b.push_back(v);
  }
  for (Vertex u = 0; u < b_end; ++u)
    for (Vertex w : choose_distinct(u < a_end ? not_a : not_b, spec.rbar, rng)) edges.push_back({w, u});

  for (Vertex u = 0; u < b_end; ++u)
    for (Vertex v = b_end; v < n; ++v) edges.push_back({u, v});

  const auto perm = random_permutation(n, rng);
  std::vector<Block> labels(n);
  for (Vertex v = 0; v < n; ++v) labels[perm[v]] = block_of(v);
  for (Edge& e : edges) e = {perm[e.from], perm[e.to]};
  return {Digraph::from_edges(n, std::move(edges)), TriPartition(std::move(labels)), spec.rbar};
}

/// Each ordered pair (a, b), a != b, becomes an edge independently with
/// probability edge_prob.
inline Digraph generate_uniform_digraph(std::size_t n, double edge_prob, std::uint64_t seed) {
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = 0; b < n; ++b) {
      if (a == b) continue;
      if (rng.unit() < edge_prob) edges.push_back({a, b});
    }
  return Digraph::from_edges(n, std::move(edges));
}

// Ground-truth side file: "A: ids", "B: ids", "rbar: k", ids ascending and
// space separated.
inline void write_ground_truth(const PlantedGraph& p, std::ostream& out) {
  auto line = [&](const char* key, const VertexSet& s) {
    out << key << ':';
    for (Vertex v : s) out << ' ' << v;
    out << '\n';
  };
  line("A", p.truth.a());
  line("B", p.truth.b());
  out << "rbar: " << p.rbar << '\n';
}

struct GroundTruth {
  VertexSet a;
  VertexSet b;
  std::size_t rbar = 0;
};

inline GroundTruth read_ground_truth(std::istream& in) {
  GroundTruth gt;
  bool seen_a = false, seen_b = false, seen_r = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("ground truth: malformed line: " + line);
    const std::string key = line.substr(0, colon);
    std::istringstream rest(line.substr(colon + 1));
    if (key == "A" || key == "B") {
      VertexSet& s = key == "A" ? gt.a : gt.b;
      (key == "A" ? seen_a : seen_b) = true;
      std::uint64_t v;
      while (rest >> v) s.push_back(static_cast<Vertex>(v));
      if (!rest.eof()) throw std::invalid_argument("ground truth: bad id list for " + key);
    } else if (key == "rbar") {
      if (!(rest >> gt.rbar)) throw std::invalid_argument("ground truth: bad rbar");
      seen_r = true;
    } else {
      throw std::invalid_argument("ground truth: unknown key " + key);
    }
  }
  if (!seen_a || !seen_b || !seen_r) throw std::invalid_argument("ground truth: missing A, B or rbar line");
  return gt;
}

}  // namespace rrobust
