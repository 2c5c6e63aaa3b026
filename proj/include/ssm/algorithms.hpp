#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ssm/graph.hpp"
#include "ssm/stream.hpp"

namespace ssm {

/// Parameters of the two-pass meta-algorithm: matched edges are subsampled
/// with probability `p` and wings are grown with degree bound `d`.
struct MetaParams {
  double p = 1.0;
  std::uint32_t d = 1;
  std::uint64_t seed = 0;

  /// Throws std::domain_error unless 0 < p <= 1 and d >= 1.
  void validate() const;
};

/// One-edge-at-a-time form of the Greedy matching algorithm.
class GreedyMatcher {
 public:
  GreedyMatcher(Vertex n_a, Vertex n_b, SpaceAccountant* space = nullptr)
      : matching_(n_a, n_b), space_(space) {}

  bool offer(Edge e) {
    if (!matching_.can_add(e)) return false;
    matching_.add(e);
    if (space_ != nullptr) space_->store();
    return true;
  }

  const Matching& matching() const noexcept { return matching_; }
  Matching take() && { return std::move(matching_); }

 private:
  Matching matching_;
  SpaceAccountant* space_;
};

/// One-edge-at-a-time form of Greedy_d: accept ab iff the unit-side endpoint
/// is still free and the other endpoint has degree below the bound.
class SemiMatcher {
 public:
  SemiMatcher(Vertex n_a, Vertex n_b, Side unit_side, std::uint32_t bound,
              SpaceAccountant* space = nullptr)
      : semi_(n_a, n_b, unit_side, bound), space_(space) {}

  bool offer(Edge e) {
    if (!semi_.can_add(e)) return false;
    semi_.add(e);
    if (space_ != nullptr) space_->store();
    return true;
  }

  const SemiMatching& semi_matching() const noexcept { return semi_; }
  SemiMatching take() && { return std::move(semi_); }

 private:
  SemiMatching semi_;
  SpaceAccountant* space_;
};

/// Greedy over one pass. The reader must be at the start of a pass.
template <EdgeReader R>
Matching greedy(R& reader) {
  if (!reader.at_pass_start()) throw StreamError("greedy needs a fresh pass");
  GreedyMatcher matcher(reader.n_a(), reader.n_b(), &reader.space());
  for (auto batch = reader.next_batch(); !batch.empty(); batch = reader.next_batch()) {
    for (const Edge e : batch) matcher.offer(e);
  }
  return std::move(matcher).take();
}

/// Greedy_d over one pass: degree <= 1 on `unit_side`, <= d on the other.
template <EdgeReader R>
SemiMatching greedy_d(R& reader, Side unit_side, std::uint32_t d) {
  if (!reader.at_pass_start()) throw StreamError("greedy_d needs a fresh pass");
  if (d == 0) throw std::domain_error("degree bound must be >= 1");
  SemiMatcher matcher(reader.n_a(), reader.n_b(), unit_side, d, &reader.space());
  for (auto batch = reader.next_batch(); !batch.empty(); batch = reader.next_batch()) {
    for (const Edge e : batch) matcher.offer(e);
  }
  return std::move(matcher).take();
}

/// Keeps each edge independently with probability p (seeded, reproducible).
Matching subsample(const Matching& m, double p, std::uint64_t seed);

/// Independent Bernoulli(p) vertex subset of one side; the other side is full.
VertexMask sample_side(Vertex n_a, Vertex n_b, Side sampled, double p, std::uint64_t seed);

/// A 3-augmenting path b' - a - b - a' around the matched edge ab, with
/// wings ab' in S_L and a'b in S_R.
struct AugmentingPath {
  Vertex left_wing = kNoVertex;   // b'
  Vertex a = kNoVertex;
  Vertex b = kNoVertex;
  Vertex right_wing = kNoVertex;  // a'

  friend constexpr auto operator<=>(const AugmentingPath&, const AugmentingPath&) = default;
};

struct PathSet {
  std::vector<AugmentingPath> candidates;
  std::vector<AugmentingPath> selected;  // a largest vertex-disjoint subset
};

/// Everything the second pass retains.
struct AugmentationPass {
  Matching sampled;    // M'
  SemiMatching left;   // S_L, unit side A
  SemiMatching right;  // S_R, unit side B
  PathSet paths;
};

/// Second pass of the meta-algorithm over a fresh pass of `stream`:
/// subsamples `m`, grows both wing semi-matchings in the same pass, and picks a
/// largest vertex-disjoint set of completed 3-augmenting paths. Throws
/// std::invalid_argument if `m` is not maximal in the streamed graph (detected
/// during the pass).
AugmentationPass find_augmenting_paths(EdgeStream& stream, const Matching& m,
                                       const MetaParams& params);

/// Largest vertex-disjoint subset of `candidates`.
std::vector<AugmentingPath> select_disjoint_paths(std::span<const AugmentingPath> candidates,
                                                  Vertex n_a, Vertex n_b);

/// M xor the edges of each path. Throws std::logic_error if a path does not
/// fit `m` (middle edge absent or a wing endpoint already covered).
Matching augment(const Matching& m, std::span<const AugmentingPath> paths);

struct RunReport {
  std::uint64_t first_pass_size = 0;  // |M|
  std::uint64_t sampled_size = 0;     // |M'|
  std::uint64_t left_wings = 0;       // |S_L|
  std::uint64_t right_wings = 0;      // |S_R|
  std::uint64_t candidates = 0;       // |P|
  std::uint64_t augmentations = 0;    // |Q|
  std::uint64_t final_size = 0;       // |M| + |Q|
  std::optional<std::uint64_t> mu;    // matching number, when known
  std::uint64_t peak_space = 0;
  std::uint32_t passes = 0;

  /// |M| / mu - 1/2; zero for an edgeless graph. Requires mu.
  double epsilon() const;
  /// final_size / mu; one for an edgeless graph. Requires mu.
  double ratio() const;
};

struct TwoPassResult {
  Matching output;
  Matching first_pass;
  AugmentationPass second_pass;
  RunReport report;
};

/// Greedy in pass one, find_augmenting_paths in pass two, then augments.
/// `mu` is only recorded in the report.
TwoPassResult two_pass(EdgeStream& stream, const MetaParams& params,
                       std::optional<std::uint64_t> mu = std::nullopt);

/// two_pass on a materialised graph, with mu from the exact oracle.
TwoPassResult two_pass(const BipartiteGraph& g, const MetaParams& params);

/// Worst-case approximation factor guaranteed by the meta-algorithm
/// (lower-order terms dropped):
///   1/2 + (1/(d+p) - 1/(2d)) p    if p <= d(sqrt2 - 1)
///   1/2 + (d-p)/(6d+2p)           otherwise
/// Throws std::domain_error outside 0 < p <= 1, d >= 1.
double predicted_factor(double p, std::uint32_t d);

/// Augmenting paths the meta-algorithm finds on the tight instance, as a
/// fraction of mu: (1/(d+p) - 1/(2d)) p.
double tight_path_fraction(double p, std::uint32_t d);

struct BestSetting {
  double p = 0.0;
  double factor = 0.0;
};

/// Maximiser of predicted_factor over p in (0, 1] for fixed d:
/// p = min(d(sqrt2 - 1), 1).
BestSetting best_setting(std::uint32_t d);

}  // namespace ssm
