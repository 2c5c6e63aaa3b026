#include "ssm/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ssm/random.hpp"

namespace ssm {

void MetaParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("sampling probability must lie in (0, 1], got " + std::to_string(p));
  }
  if (d < 1) throw std::domain_error("degree bound must be >= 1");
}

Matching subsample(const Matching& m, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("sampling probability must lie in (0, 1]");
  }
  Rng rng(seed);
  Matching out(m.n_a(), m.n_b());
  // One draw per edge in A order, so the sample is a function of (m, p, seed).
  for (const Edge e : m.edges()) {
    if (rng.bernoulli(p)) out.add(e);
  }
  return out;
}

VertexMask sample_side(Vertex n_a, Vertex n_b, Side sampled, double p, std::uint64_t seed) {
  VertexMask mask(n_a, n_b, false);
  Rng rng(seed);
  const Vertex n_sampled = sampled == Side::A ? n_a : n_b;
  for (Vertex v = 0; v < n_sampled; ++v) mask.set(sampled, v, rng.bernoulli(p));
  const Side full = opposite(sampled);
  const Vertex n_full = full == Side::A ? n_a : n_b;
  for (Vertex v = 0; v < n_full; ++v) mask.set(full, v);
  return mask;
}

std::vector<AugmentingPath> select_disjoint_paths(std::span<const AugmentingPath> candidates,
                                                  Vertex n_a, Vertex n_b) {
  // Middle edges are distinct matched edges and wing endpoints are unmatched,
  // so two candidates conflict only through a shared b' or a shared a'. A
  // largest conflict-free subset is a maximum matching of the graph with one
  // edge b' -> a' per candidate; parallel candidates collapse to the first.
  std::vector<std::size_t> order(candidates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto wings = [&](std::size_t i) {
    return std::pair(candidates[i].left_wing, candidates[i].right_wing);
  };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return wings(x) < wings(y); });
  std::vector<char> keep(candidates.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    keep[order[k]] = k == 0 || wings(order[k - 1]) != wings(order[k]);
  }
  std::vector<Edge> conflict_edges;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (!keep[i]) continue;
    conflict_edges.push_back({candidates[i].left_wing, candidates[i].right_wing});
    owner.push_back(i);
  }
  const BipartiteGraph conflicts(n_b, n_a, conflict_edges);
  const Matching chosen = maximum_matching(conflicts);

  std::vector<AugmentingPath> selected;
  selected.reserve(chosen.size());
  for (std::size_t k = 0; k < conflict_edges.size(); ++k) {
    if (chosen.contains(conflict_edges[k])) selected.push_back(candidates[owner[k]]);
  }
  return selected;
}

Matching augment(const Matching& m, std::span<const AugmentingPath> paths) {
  Matching out = m;
  for (const auto& path : paths) {
    out.remove({path.a, path.b});
    out.add({path.a, path.left_wing});
    out.add({path.right_wing, path.b});
  }
  return out;
}

AugmentationPass find_augmenting_paths(EdgeStream& stream, const Matching& m,
                                       const MetaParams& params) {
  params.validate();
  if (!stream.at_pass_start()) throw StreamError("augmenting pass needs a fresh pass");
  const Vertex n_a = stream.n_a();
  const Vertex n_b = stream.n_b();
  if (m.n_a() != n_a || m.n_b() != n_b) {
    throw std::invalid_argument("matching does not match the stream's vertex counts");
  }
  SpaceAccountant& space = stream.space();

  AugmentationPass out;
  out.sampled = subsample(m, params.p, params.seed);

  // G_L' = G[A(M') + unmatched B],  G_R' = G[unmatched A + B(M')].
  VertexMask left(n_a, n_b);
  VertexMask right(n_a, n_b);
  for (Vertex a = 0; a < n_a; ++a) {
    left.set(Side::A, a, out.sampled.covers(Side::A, a));
    right.set(Side::A, a, !m.covers(Side::A, a));
  }
  for (Vertex b = 0; b < n_b; ++b) {
    left.set(Side::B, b, !m.covers(Side::B, b));
    right.set(Side::B, b, out.sampled.covers(Side::B, b));
  }

  SemiMatcher left_wings(n_a, n_b, Side::A, params.d, &space);
  SemiMatcher right_wings(n_a, n_b, Side::B, params.d, &space);
  std::optional<Edge> unblocked;
  for (auto batch = stream.next_batch(); !batch.empty(); batch = stream.next_batch()) {
    for (const Edge e : batch) {
      if (left.keeps(e)) left_wings.offer(e);
      if (right.keeps(e)) right_wings.offer(e);
      // Both endpoints unmatched by M: M was not maximal.
      if (!m.covers(Side::A, e.a) && !m.covers(Side::B, e.b) && !unblocked) unblocked = e;
    }
  }
  if (unblocked) {
    throw std::invalid_argument("first-pass matching is not maximal: " + to_string(*unblocked) +
                                " has both endpoints free");
  }
  out.left = std::move(left_wings).take();
  out.right = std::move(right_wings).take();

  for (const Edge e : out.sampled.edges()) {
    const Vertex b_wing = out.left.partner(e.a);
    const Vertex a_wing = out.right.partner(e.b);
    if (b_wing != kNoVertex && a_wing != kNoVertex) {
      out.paths.candidates.push_back({b_wing, e.a, e.b, a_wing});
    }
  }
  space.store(out.paths.candidates.size());
  out.paths.selected = select_disjoint_paths(out.paths.candidates, n_a, n_b);
  space.store(out.paths.selected.size());
  return out;
}

double RunReport::epsilon() const {
  if (!mu) throw std::logic_error("epsilon needs the matching number");
  if (*mu == 0) return 0.0;
  return static_cast<double>(first_pass_size) / static_cast<double>(*mu) - 0.5;
}

double RunReport::ratio() const {
  if (!mu) throw std::logic_error("ratio needs the matching number");
  if (*mu == 0) return 1.0;
  return static_cast<double>(final_size) / static_cast<double>(*mu);
}

TwoPassResult two_pass(EdgeStream& stream, const MetaParams& params,
                       std::optional<std::uint64_t> mu) {
  params.validate();
  TwoPassResult result;
  result.first_pass = greedy(stream);
  stream.rewind();
  result.second_pass = find_augmenting_paths(stream, result.first_pass, params);

  SpaceAccountant& space = stream.space();
  const auto& pass = result.second_pass;
  result.output = augment(result.first_pass, pass.paths.selected);
  // The candidate list and both wing sets are dropped once the output exists.
  space.release(pass.paths.candidates.size() + pass.left.size() + pass.right.size());

  auto& r = result.report;
  r.first_pass_size = result.first_pass.size();
  r.sampled_size = pass.sampled.size();
  r.left_wings = pass.left.size();
  r.right_wings = pass.right.size();
  r.candidates = pass.paths.candidates.size();
  r.augmentations = pass.paths.selected.size();
  r.final_size = result.output.size();
  r.mu = mu;
  r.peak_space = report_space(space);
  r.passes = stream.passes_used();
  return result;
}

TwoPassResult two_pass(const BipartiteGraph& g, const MetaParams& params) {
  auto stream = open_stream(g);
  return two_pass(stream, params, maximum_matching(g).size());
}

namespace {

void check_domain(double p, std::uint32_t d) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must lie in (0, 1]");
  if (d < 1) throw std::domain_error("d must be >= 1");
}

}  // namespace

double tight_path_fraction(double p, std::uint32_t d) {
  check_domain(p, d);
  const double dd = d;
  return (1.0 / (dd + p) - 1.0 / (2.0 * dd)) * p;
}

double predicted_factor(double p, std::uint32_t d) {
  check_domain(p, d);
  const double dd = d;
  if (p <= dd * (std::sqrt(2.0) - 1.0)) return 0.5 + tight_path_fraction(p, d);
  return 0.5 + (dd - p) / (6.0 * dd + 2.0 * p);
}

BestSetting best_setting(std::uint32_t d) {
  if (d < 1) throw std::domain_error("d must be >= 1");
  const double p = std::min(d * (std::sqrt(2.0) - 1.0), 1.0);
  return {p, predicted_factor(p, d)};
}

}  // namespace ssm
