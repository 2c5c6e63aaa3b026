#include "ssm/graph.hpp"

#include <algorithm>
#include <deque>

namespace ssm {

namespace {

std::uint64_t edge_key(Edge e) noexcept {
  return (static_cast<std::uint64_t>(e.a) << 32) | static_cast<std::uint64_t>(e.b);
}

}  // namespace

std::string to_string(Edge e) {
  return "a" + std::to_string(e.a) + "-b" + std::to_string(e.b);
}

BipartiteGraph::BipartiteGraph(Vertex n_a, Vertex n_b, std::vector<Edge> edges)
    : n_a_(n_a), n_b_(n_b), edges_(std::move(edges)) {
  sorted_keys_.reserve(edges_.size());
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge e = edges_[i];
    if (e.a >= n_a_ || e.b >= n_b_) {
      throw GraphError("edge " + std::to_string(i) + " (" + to_string(e) +
                       ") has an endpoint out of range for " + std::to_string(n_a_) + "+" +
                       std::to_string(n_b_) + " vertices");
    }
    sorted_keys_.push_back(edge_key(e));
  }
  std::sort(sorted_keys_.begin(), sorted_keys_.end());
  const auto dup = std::adjacent_find(sorted_keys_.begin(), sorted_keys_.end());
  if (dup != sorted_keys_.end()) {
    const Edge e{static_cast<Vertex>(*dup >> 32), static_cast<Vertex>(*dup & 0xffffffffu)};
    throw GraphError("duplicate edge " + to_string(e));
  }
}

bool BipartiteGraph::has_edge(Edge e) const noexcept {
  return std::binary_search(sorted_keys_.begin(), sorted_keys_.end(), edge_key(e));
}

// --- Matching ---------------------------------------------------------------

Matching::Matching(Vertex n_a, Vertex n_b) : mate_a_(n_a, kNoVertex), mate_b_(n_b, kNoVertex) {}

void Matching::add(Edge e) {
  if (!can_add(e)) {
    throw std::logic_error("cannot add " + to_string(e) + " to matching");
  }
  mate_a_[e.a] = e.b;
  mate_b_[e.b] = e.a;
  ++size_;
}

void Matching::remove(Edge e) {
  if (!contains(e)) {
    throw std::logic_error("edge " + to_string(e) + " is not in the matching");
  }
  mate_a_[e.a] = kNoVertex;
  mate_b_[e.b] = kNoVertex;
  --size_;
}

std::vector<Edge> Matching::edges() const {
  std::vector<Edge> out;
  out.reserve(size_);
  for (Vertex a = 0; a < mate_a_.size(); ++a) {
    if (mate_a_[a] != kNoVertex) out.push_back({a, mate_a_[a]});
  }
  return out;
}

// --- SemiMatching -----------------------------------------------------------

SemiMatching::SemiMatching(Vertex n_a, Vertex n_b, Side unit_side, std::uint32_t bound)
    : unit_side_(unit_side),
      bound_(bound),
      partner_(unit_side == Side::A ? n_a : n_b, kNoVertex),
      degree_other_(unit_side == Side::A ? n_b : n_a, 0) {
  if (bound == 0) throw std::invalid_argument("semi-matching degree bound must be >= 1");
}

void SemiMatching::add(Edge e) {
  if (!can_add(e)) {
    throw std::logic_error("cannot add " + to_string(e) + " to semi-matching");
  }
  partner_[endpoint(e, unit_side_)] = endpoint(e, opposite(unit_side_));
  ++degree_other_[endpoint(e, opposite(unit_side_))];
  edges_.push_back(e);
}

std::uint32_t SemiMatching::degree(Side s, Vertex v) const noexcept {
  if (s == unit_side_) return partner_[v] == kNoVertex ? 0 : 1;
  return degree_other_[v];
}

// --- Checks -----------------------------------------------------------------

Validation validate_semi_matching(const BipartiteGraph& g, std::span<const Edge> edges,
                                  Side unit_side, std::uint32_t bound) {
  std::vector<std::uint32_t> deg_a(g.n_a(), 0);
  std::vector<std::uint32_t> deg_b(g.n_b(), 0);
  const std::uint32_t cap_a = unit_side == Side::A ? 1 : bound;
  const std::uint32_t cap_b = unit_side == Side::B ? 1 : bound;
  std::vector<std::uint64_t> seen;
  seen.reserve(edges.size());
  for (const Edge e : edges) {
    if (e.a >= g.n_a() || e.b >= g.n_b() || !g.has_edge(e)) {
      return {false, to_string(e) + " is not an edge of the graph"};
    }
    seen.push_back(edge_key(e));
    if (++deg_a[e.a] > cap_a) {
      return {false, "vertex a" + std::to_string(e.a) + " exceeds degree " + std::to_string(cap_a)};
    }
    if (++deg_b[e.b] > cap_b) {
      return {false, "vertex b" + std::to_string(e.b) + " exceeds degree " + std::to_string(cap_b)};
    }
  }
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    return {false, "edge listed twice"};
  }
  return {};
}

Validation validate_matching(const BipartiteGraph& g, std::span<const Edge> edges) {
  return validate_semi_matching(g, edges, Side::A, 1);
}

Validation validate_matching(const BipartiteGraph& g, const Matching& m) {
  if (m.n_a() != g.n_a() || m.n_b() != g.n_b()) {
    return {false, "matching vertex universe does not match the graph"};
  }
  const auto edges = m.edges();
  return validate_matching(g, edges);
}

bool is_maximal(const BipartiteGraph& g, const Matching& m) {
  return std::none_of(g.edges().begin(), g.edges().end(), [&](Edge e) {
    return !m.covers(Side::A, e.a) && !m.covers(Side::B, e.b);
  });
}

// --- Hopcroft-Karp ----------------------------------------------------------

namespace {

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : n_a_(g.n_a()),
        row_(static_cast<std::size_t>(g.n_a()) + 1, 0),
        col_(g.edge_count()),
        mate_a_(g.n_a(), kNoVertex),
        mate_b_(g.n_b(), kNoVertex),
        dist_(g.n_a(), kInf),
        it_(g.n_a(), 0) {
    for (const Edge e : g.edges()) ++row_[e.a + 1];
    for (Vertex a = 0; a < n_a_; ++a) row_[a + 1] += row_[a];
    std::vector<std::size_t> fill(row_.begin(), row_.end() - 1);
    for (const Edge e : g.edges()) col_[fill[e.a]++] = e.b;
  }

  Matching run(Vertex n_b) {
    while (layer()) {
      for (Vertex a = 0; a < n_a_; ++a) it_[a] = row_[a];
      for (Vertex a = 0; a < n_a_; ++a) {
        if (mate_a_[a] == kNoVertex) augment_from(a);
      }
    }
    Matching m(n_a_, n_b);
    for (Vertex a = 0; a < n_a_; ++a) {
      if (mate_a_[a] != kNoVertex) m.add({a, mate_a_[a]});
    }
    return m;
  }

 private:
  static constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();

  // BFS layering from all free A vertices; true iff a free B vertex is reachable.
  bool layer() {
    std::deque<Vertex> queue;
    for (Vertex a = 0; a < n_a_; ++a) {
      if (mate_a_[a] == kNoVertex) {
        dist_[a] = 0;
        queue.push_back(a);
      } else {
        dist_[a] = kInf;
      }
    }
    free_dist_ = kInf;
    while (!queue.empty()) {
      const Vertex a = queue.front();
      queue.pop_front();
      if (dist_[a] >= free_dist_) continue;
      for (std::size_t i = row_[a]; i < row_[a + 1]; ++i) {
        const Vertex next = mate_b_[col_[i]];
        if (next == kNoVertex) {
          if (free_dist_ == kInf) free_dist_ = dist_[a] + 1;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[a] + 1;
          queue.push_back(next);
        }
      }
    }
    return free_dist_ != kInf;
  }

  // Iterative layered DFS; stack_[i] is the A vertex at depth i and
  // col_[it_[stack_[i]]] the B vertex it currently tries.
  bool augment_from(Vertex root) {
    stack_.clear();
    stack_.push_back(root);
    while (!stack_.empty()) {
      const Vertex a = stack_.back();
      if (it_[a] == row_[a + 1]) {
        dist_[a] = kInf;
        stack_.pop_back();
        continue;
      }
      const Vertex b = col_[it_[a]];
      const Vertex next = mate_b_[b];
      if (next == kNoVertex) {
        if (free_dist_ == dist_[a] + 1) {
          for (std::size_t i = stack_.size(); i-- > 0;) {
            const Vertex ai = stack_[i];
            const Vertex bi = col_[it_[ai]];
            mate_a_[ai] = bi;
            mate_b_[bi] = ai;
          }
          return true;
        }
        ++it_[a];
      } else if (dist_[next] != kInf && dist_[next] == dist_[a] + 1) {
        stack_.push_back(next);
      } else {
        ++it_[a];
      }
    }
    return false;
  }

  Vertex n_a_;
  std::vector<std::size_t> row_;
  std::vector<Vertex> col_;
  std::vector<Vertex> mate_a_;
  std::vector<Vertex> mate_b_;
  std::vector<std::uint32_t> dist_;
  std::vector<std::size_t> it_;
  std::vector<Vertex> stack_;
  std::uint32_t free_dist_ = kInf;
};

}  // namespace

Matching maximum_matching(const BipartiteGraph& g) { return HopcroftKarp(g).run(g.n_b()); }

}  // namespace ssm
