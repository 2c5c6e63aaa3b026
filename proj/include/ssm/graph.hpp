#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssm {

using Vertex = std::uint32_t;
inline constexpr Vertex kNoVertex = std::numeric_limits<Vertex>::max();

/// The two vertex classes of a bipartite graph. A vertex is identified by
/// (side, index); indices of different sides never share a number space.
enum class Side : std::uint8_t { A, B };

constexpr Side opposite(Side s) noexcept { return s == Side::A ? Side::B : Side::A; }

struct Edge {
  Vertex a = 0;
  Vertex b = 0;

  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

constexpr Vertex endpoint(Edge e, Side s) noexcept { return s == Side::A ? e.a : e.b; }

std::string to_string(Edge e);

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable simple bipartite graph. The edge order is the stream order.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  /// Throws GraphError on an out-of-range endpoint or a repeated (a, b) pair.
  BipartiteGraph(Vertex n_a, Vertex n_b, std::vector<Edge> edges);

  Vertex n_a() const noexcept { return n_a_; }
  Vertex n_b() const noexcept { return n_b_; }
  Vertex size(Side s) const noexcept { return s == Side::A ? n_a_ : n_b_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  bool has_edge(Edge e) const noexcept;

 private:
  Vertex n_a_ = 0;
  Vertex n_b_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::uint64_t> sorted_keys_;
};

/// A set of vertex-disjoint edges over a fixed vertex universe. Disjointness is
/// enforced on insertion.
class Matching {
 public:
  Matching() = default;
  Matching(Vertex n_a, Vertex n_b);

  Vertex n_a() const noexcept { return static_cast<Vertex>(mate_a_.size()); }
  Vertex n_b() const noexcept { return static_cast<Vertex>(mate_b_.size()); }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool can_add(Edge e) const noexcept {
    return e.a < mate_a_.size() && e.b < mate_b_.size() && mate_a_[e.a] == kNoVertex &&
           mate_b_[e.b] == kNoVertex;
  }
  /// Throws std::logic_error if either endpoint is already covered.
  void add(Edge e);
  /// Throws std::logic_error if the edge is not in the matching.
  void remove(Edge e);
  bool contains(Edge e) const noexcept {
    return e.a < mate_a_.size() && mate_a_[e.a] == e.b && e.b != kNoVertex;
  }

  Vertex mate_of_a(Vertex a) const noexcept { return mate_a_[a]; }
  Vertex mate_of_b(Vertex b) const noexcept { return mate_b_[b]; }
  bool covers(Side s, Vertex v) const noexcept {
    return (s == Side::A ? mate_a_[v] : mate_b_[v]) != kNoVertex;
  }

  /// Edges sorted by A endpoint.
  std::vector<Edge> edges() const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<Vertex> mate_a_;
  std::vector<Vertex> mate_b_;
  std::size_t size_ = 0;
};

/// Degree-bounded semi-matching: every vertex on `unit_side` has degree at most
/// one, every vertex on the other side has degree at most `bound`.
class SemiMatching {
 public:
  SemiMatching() = default;
  SemiMatching(Vertex n_a, Vertex n_b, Side unit_side, std::uint32_t bound);

  Side unit_side() const noexcept { return unit_side_; }
  std::uint32_t bound() const noexcept { return bound_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }

  bool can_add(Edge e) const noexcept {
    const Vertex u = endpoint(e, unit_side_);
    const Vertex o = endpoint(e, opposite(unit_side_));
    return partner_[u] == kNoVertex && degree_other_[o] < bound_;
  }
  /// Throws std::logic_error if a degree cap would be exceeded.
  void add(Edge e);

  /// Neighbour of a unit-side vertex, or kNoVertex.
  Vertex partner(Vertex unit_vertex) const noexcept { return partner_[unit_vertex]; }
  std::uint32_t degree(Side s, Vertex v) const noexcept;

  /// Edges in insertion order.
  std::span<const Edge> edges() const noexcept { return edges_; }

 private:
  Side unit_side_ = Side::A;
  std::uint32_t bound_ = 1;
  std::vector<Vertex> partner_;
  std::vector<std::uint32_t> degree_other_;
  std::vector<Edge> edges_;
};

struct Validation {
  bool ok = true;
  std::string violation;  // first violation found, empty when ok

  explicit operator bool() const noexcept { return ok; }
};

/// Accepts iff every edge is in `g` and no two edges share an endpoint.
Validation validate_matching(const BipartiteGraph& g, std::span<const Edge> edges);
Validation validate_matching(const BipartiteGraph& g, const Matching& m);

Validation validate_semi_matching(const BipartiteGraph& g, std::span<const Edge> edges,
                                  Side unit_side, std::uint32_t bound);

/// True iff no edge of `g` has both endpoints uncovered by `m`.
bool is_maximal(const BipartiteGraph& g, const Matching& m);

/// Exact maximum-cardinality matching (Hopcroft-Karp). Free vertices are
/// scanned in index order and adjacency in stream order, so the result is a
/// deterministic function of the input.
Matching maximum_matching(const BipartiteGraph& g);

}  // namespace ssm
