#pragma once

// Immutable simple digraph stored as sorted in-neighbor lists, plus the
// edge-list text format and the degree/reachability primitives.
//
// File format: first non-comment line "n m", then m lines "a b", each
// declaring the directed edge a -> b (a is an in-neighbor of b). Lines whose
// first non-blank character is '#' are ignored; blank lines are skipped.
// Vertex ids are 0-indexed. A pair written (u, v) in the "edge from v to u"
// convention corresponds to the file line "v u".

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace rrobust {

using Vertex = std::uint32_t;

/// Sorted, duplicate-free list of vertex ids.
using VertexSet = std::vector<Vertex>;

struct Edge {
  Vertex from;
  Vertex to;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class ParseErrorKind { kMalformed, kIdOutOfRange, kSelfLoop, kDuplicateEdge, kEdgeCountMismatch };

inline const char* to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::kMalformed: return "malformed line";
    case ParseErrorKind::kIdOutOfRange: return "vertex id out of range";
    case ParseErrorKind::kSelfLoop: return "self-loop";
    case ParseErrorKind::kDuplicateEdge: return "duplicate edge";
    case ParseErrorKind::kEdgeCountMismatch: return "edge count mismatch";
  }
  return "unknown";
}

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail)
      : std::runtime_error("line " + std::to_string(line) + ": " + to_string(kind) +
                           (detail.empty() ? "" : " (" + detail + ")")),
        kind_(kind),
        line_(line) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

class Digraph {
 public:
  Digraph() : offsets_(1, 0) {}

  /// Builds a graph from directed edges. Throws ParseError (line 0) on
  /// out-of-range ids, self-loops or duplicates.
  static Digraph from_edges(std::size_t n, std::vector<Edge> edges) {
    for (const Edge& e : edges) {
      if (e.from >= n || e.to >= n)
        throw ParseError(ParseErrorKind::kIdOutOfRange, 0,
                         std::to_string(e.from) + " " + std::to_string(e.to));
      if (e.from == e.to) throw ParseError(ParseErrorKind::kSelfLoop, 0, std::to_string(e.from));
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& x, const Edge& y) { return std::pair(x.to, x.from) < std::pair(y.to, y.from); });
    if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end())
      throw ParseError(ParseErrorKind::kDuplicateEdge, 0,
                       std::to_string(dup->from) + " " + std::to_string(dup->to));
    Digraph g;
    g.offsets_.assign(n + 1, 0);
    g.in_.reserve(edges.size());
    for (const Edge& e : edges) {
      ++g.offsets_[e.to + 1];
      g.in_.push_back(e.from);
    }
    for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
    return g;
  }

  std::size_t num_vertices() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return in_.size(); }

  std::span<const Vertex> in_neighbors(Vertex v) const {
    check(v);
    return {in_.data() + offsets_[v], in_.data() + offsets_[v + 1]};
  }

  std::size_t in_degree(Vertex v) const {
    check(v);
    return offsets_[v + 1] - offsets_[v];
  }

  bool has_edge(Vertex from, Vertex to) const {
    auto nb = in_neighbors(to);
    return std::binary_search(nb.begin(), nb.end(), from);
  }

  /// All edges in ascending (from, to) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(in_.size());
    for (Vertex v = 0; v < num_vertices(); ++v)
      for (Vertex u : in_neighbors(v)) out.push_back({u, v});
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void check(Vertex v) const {
    if (v >= num_vertices()) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
  }

  std::vector<std::size_t> offsets_;
  std::vector<Vertex> in_;
};

namespace detail {

inline bool blank_or_comment(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

// Reads exactly two non-negative integers from a line; nothing else allowed.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> two_ints(const std::string& line) {
  std::istringstream in(line);
  std::string x, y, rest;
  if (!(in >> x >> y) || (in >> rest)) return std::nullopt;
  auto num = [](const std::string& s) -> std::optional<std::uint64_t> {
    if (s.empty() || s.size() > 18 || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
      return std::nullopt;
    return std::stoull(s);
  };
  auto a = num(x), b = num(y);
  if (!a || !b) return std::nullopt;
  return std::pair(*a, *b);
}

}  // namespace detail

inline Digraph parse_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::pair<std::uint64_t, std::uint64_t>> header;
  std::vector<Edge> edges;
  std::vector<std::size_t> edge_lines;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::blank_or_comment(line)) continue;
    auto ints = detail::two_ints(line);
    if (!ints) throw ParseError(ParseErrorKind::kMalformed, lineno, line);
    if (!header) {
      if (ints->first > std::numeric_limits<Vertex>::max())
        throw ParseError(ParseErrorKind::kMalformed, lineno, "vertex count too large");
      header = ints;
      continue;
    }
    const auto n = header->first;
    if (ints->first >= n || ints->second >= n) throw ParseError(ParseErrorKind::kIdOutOfRange, lineno, line);
    if (ints->first == ints->second) throw ParseError(ParseErrorKind::kSelfLoop, lineno, line);
    edges.push_back({static_cast<Vertex>(ints->first), static_cast<Vertex>(ints->second)});
    edge_lines.push_back(lineno);
  }
  if (!header) throw ParseError(ParseErrorKind::kMalformed, lineno, "missing \"n m\" header");

  // Report the later line of a duplicate pair.
  std::vector<std::size_t> order(edges.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(edges[x].from, edges[x].to, x) < std::tie(edges[y].from, edges[y].to, y);
  });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (edges[order[i]] == edges[order[i - 1]])
      throw ParseError(ParseErrorKind::kDuplicateEdge, edge_lines[order[i]],
                       std::to_string(edges[order[i]].from) + " " + std::to_string(edges[order[i]].to));

  if (edges.size() != header->second)
    throw ParseError(ParseErrorKind::kEdgeCountMismatch, lineno,
                     "header declares " + std::to_string(header->second) + ", found " + std::to_string(edges.size()));
  return Digraph::from_edges(header->first, std::move(edges));
}

inline Digraph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  return parse_edge_list(in);
}

/// Canonical form: header, then edges in ascending (from, to) order, lines
/// separated by '\n' with no trailing newline.
inline void write_edge_list(const Digraph& g, std::ostream& out) {
  out << g.num_vertices() << ' ' << g.num_edges();
  for (const Edge& e : g.edges()) out << '\n' << e.from << ' ' << e.to;
}

inline std::string write_edge_list(const Digraph& g) {
  std::ostringstream out;
  write_edge_list(g, out);
  return out.str();
}

// ---------------------------------------------------------------------------
// Degree and reachability primitives

inline std::size_t in_degree(const Digraph& g, Vertex v) { return g.in_degree(v); }

struct MinDegree {
  Vertex vertex;
  std::size_t degree;
};

/// Smallest-id vertex attaining the minimum in-degree. Requires n >= 1.
inline MinDegree min_in_degree(const Digraph& g) {
  if (g.num_vertices() == 0) throw std::invalid_argument("min_in_degree: empty graph");
  MinDegree best{0, g.in_degree(0)};
  for (Vertex v = 1; v < g.num_vertices(); ++v)
    if (g.in_degree(v) < best.degree) best = {v, g.in_degree(v)};
  return best;
}

/// Membership mask of a vertex set over 0..n-1.
inline std::vector<char> membership(const Digraph& g, std::span<const Vertex> s) {
  std::vector<char> mask(g.num_vertices(), 0);
  for (Vertex v : s) {
    if (v >= g.num_vertices()) throw std::out_of_range("vertex id " + std::to_string(v) + " out of range");
    mask[v] = 1;
  }
  return mask;
}

/// Number of in-neighbors of v outside s. s must be sorted.
inline std::size_t outside_count(const Digraph& g, Vertex v, std::span<const Vertex> s) {
  std::size_t count = 0;
  for (Vertex u : g.in_neighbors(v))
    if (!std::binary_search(s.begin(), s.end(), u)) ++count;
  return count;
}

/// Largest r for which s is r-reachable: max over u in s of outside_count.
inline std::size_t reach_index(const Digraph& g, std::span<const Vertex> s) {
  if (s.empty()) throw std::invalid_argument("reach_index: empty set");
  auto mask = membership(g, s);
  std::size_t best = 0;
  for (Vertex u : s) {
    std::size_t count = 0;
    for (Vertex w : g.in_neighbors(u)) count += mask[w] == 0;
    best = std::max(best, count);
  }
  return best;
}

/// True iff some u in s has at least r in-neighbors outside s.
inline bool is_r_reachable(const Digraph& g, std::span<const Vertex> s, std::size_t r) {
  if (s.empty()) throw std::invalid_argument("is_r_reachable: empty set");
  auto mask = membership(g, s);
  for (Vertex u : s) {
    std::size_t count = 0;
    for (Vertex w : g.in_neighbors(u)) count += mask[w] == 0;
    if (count >= r) return true;
  }
  return false;
}

/// Minimum-degree check. Returns a minimum in-degree vertex v when
/// d_min <= 2r + delta_cap, and nothing when d_min > 2r + delta_cap.
///
/// When v is returned, {v} is not (2r+delta_cap+1)-reachable, and every
/// vertex of V\{v} has at most one in-neighbor (v) outside V\{v}, so neither
/// side of ({v}, V\{v}) is (2r+delta_cap)-reachable whenever d_min < 2r+delta_cap
/// and 2r+delta_cap >= 2, which r >= 1 guarantees.
inline std::optional<Vertex> exam_degree(const Digraph& g, std::size_t r, std::size_t delta_cap) {
  if (g.num_vertices() < 2) throw std::invalid_argument("exam_degree: need at least two vertices");
  if (r == 0) throw std::invalid_argument("exam_degree: r must be positive");
  const auto [v, d] = min_in_degree(g);
  if (d > 2 * r + delta_cap) return std::nullopt;
  return v;
}

}  // namespace rrobust
