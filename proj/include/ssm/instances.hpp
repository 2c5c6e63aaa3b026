#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "ssm/algorithms.hpp"
#include "ssm/graph.hpp"
#include "ssm/stream.hpp"

namespace ssm {

/// Worst-case input for the meta-algorithm on 4N vertices.
///
/// Side A holds A_in = [0, N) and A_out = [N, 2N); side B holds B_in = [0, N)
/// and B_out = [N, 2N). Edges:
///   M   = { a_in^i b_in^i }                      perfect on A_in x B_in
///   E_L = { a_in^i b_out^j : i >= j }
///   E_R = { a_out^i b_in^j : i >= j }
/// Stream order: M by index, then E_L, then E_R; inside E_L and E_R edges are
/// ordered by decreasing i, then increasing j. Greedy therefore returns M, and
/// the diagonals of E_L and E_R form a perfect matching, so mu = 2N.
///
/// Edges are generated on the fly; the Theta(N^2) edge list is never stored.
class HardInstance {
 public:
  static constexpr std::uint32_t kMaterializeLimit = 2000;

  /// Throws std::invalid_argument for N = 0.
  explicit HardInstance(std::uint32_t n);

  std::uint32_t n() const noexcept { return n_; }
  Vertex n_a() const noexcept { return 2 * n_; }
  Vertex n_b() const noexcept { return 2 * n_; }
  std::uint64_t edge_count() const noexcept;
  std::uint64_t mu() const noexcept { return 2ull * n_; }

  Vertex a_in(std::uint32_t i) const noexcept { return i; }
  Vertex a_out(std::uint32_t i) const noexcept { return n_ + i; }
  Vertex b_in(std::uint32_t i) const noexcept { return i; }
  Vertex b_out(std::uint32_t i) const noexcept { return n_ + i; }

  /// The planted maximal matching M.
  Matching planted() const;
  /// M*_L + M*_R, the diagonal perfect matching.
  Matching optimal() const;

  std::shared_ptr<const EdgeSource> source() const;
  /// Throws std::length_error when N exceeds kMaterializeLimit.
  BipartiteGraph materialize() const;

 private:
  std::uint32_t n_;
};

HardInstance gen_hard_instance(std::uint32_t n);

/// Indices the wing structure reaches on a HardInstance run.
struct IndexExtremes {
  std::optional<std::uint32_t> i_min;  // smallest i with a_in^i covered by S_L
  std::optional<std::uint32_t> i_max;  // largest i with b_in^i covered by S_R
  std::uint64_t augmentable = 0;       // |M''|: sampled i with i_min <= i <= i_max
};

IndexExtremes check_index_extremes(const HardInstance& h, const AugmentationPass& pass);

/// Among sampled indices, those whose a_in is covered by S_L form a suffix and
/// those whose b_in is covered by S_R form a prefix.
bool wings_monotone(const HardInstance& h, const AugmentationPass& pass);

/// Number of sampled matched edges a_in^k b_in^k with i <= k <= j.
std::uint64_t sampled_in_window(const HardInstance& h, const Matching& sampled, std::uint32_t i,
                                std::uint32_t j);

struct PlantedInstance {
  BipartiteGraph graph;
  Matching planted;  // perfect, so mu(graph) = n
};

/// n + n vertices with a random planted perfect matching plus every other pair
/// independently with probability `extra_density`; edges in random order.
PlantedInstance gen_random_planted(Vertex n, double extra_density, std::uint64_t seed);

/// Each of the n_a * n_b pairs independently with probability `density`, in
/// random order.
BipartiteGraph gen_random_bipartite(Vertex n_a, Vertex n_b, double density, std::uint64_t seed);

}  // namespace ssm
