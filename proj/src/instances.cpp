#include "ssm/instances.hpp"

#include <algorithm>
#include <string>

#include "ssm/random.hpp"

namespace ssm {

namespace {

class HardCursor final : public EdgeCursor {
 public:
  explicit HardCursor(std::uint32_t n) : n_(n), i_(n - 1) {}

  std::span<const Edge> next(std::span<Edge> scratch) override {
    std::size_t k = 0;
    const std::size_t cap = scratch.size();
    while (k < cap && phase_ != Phase::Done) {
      if (phase_ == Phase::Planted) {
        while (k < cap && j_ < n_) {
          scratch[k++] = {j_, j_};
          ++j_;
        }
        if (j_ == n_) start_block(Phase::Left);
        continue;
      }
      // E_L: (a_in^i, b_out^j); E_R: (a_out^i, b_in^j); j runs 0..i.
      const Vertex a = phase_ == Phase::Left ? i_ : n_ + i_;
      const Vertex b_base = phase_ == Phase::Left ? n_ : 0;
      while (k < cap && j_ <= i_) {
        scratch[k++] = {a, b_base + j_};
        ++j_;
      }
      if (j_ > i_) {
        if (i_ == 0) {
          start_block(phase_ == Phase::Left ? Phase::Right : Phase::Done);
        } else {
          --i_;
          j_ = 0;
        }
      }
    }
    return scratch.first(k);
  }

 private:
  enum class Phase { Planted, Left, Right, Done };

  void start_block(Phase next) {
    phase_ = next;
    i_ = n_ - 1;
    j_ = 0;
  }

  std::uint32_t n_;
  Phase phase_ = Phase::Planted;
  std::uint32_t i_;
  std::uint32_t j_ = 0;
};

class HardSource final : public EdgeSource {
 public:
  explicit HardSource(std::uint32_t n) : n_(n) {}
  Vertex n_a() const override { return 2 * n_; }
  Vertex n_b() const override { return 2 * n_; }
  std::uint64_t edge_count() const override {
    return n_ + static_cast<std::uint64_t>(n_) * (n_ + 1ull);
  }
  std::unique_ptr<EdgeCursor> cursor() const override { return std::make_unique<HardCursor>(n_); }

 private:
  std::uint32_t n_;
};

}  // namespace

HardInstance::HardInstance(std::uint32_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("hard instance needs N >= 1");
  if (n > kNoVertex / 2) throw std::invalid_argument("hard instance N too large");
}

std::uint64_t HardInstance::edge_count() const noexcept {
  return n_ + static_cast<std::uint64_t>(n_) * (n_ + 1ull);
}

Matching HardInstance::planted() const {
  Matching m(n_a(), n_b());
  for (std::uint32_t i = 0; i < n_; ++i) m.add({a_in(i), b_in(i)});
  return m;
}

Matching HardInstance::optimal() const {
  Matching m(n_a(), n_b());
  for (std::uint32_t i = 0; i < n_; ++i) {
    m.add({a_in(i), b_out(i)});
    m.add({a_out(i), b_in(i)});
  }
  return m;
}

std::shared_ptr<const EdgeSource> HardInstance::source() const {
  return std::make_shared<HardSource>(n_);
}

BipartiteGraph HardInstance::materialize() const {
  if (n_ > kMaterializeLimit) {
    throw std::length_error("hard instance with N = " + std::to_string(n_) +
                            " is streamed only; materialisation is limited to N <= " +
                            std::to_string(kMaterializeLimit));
  }
  std::vector<Edge> edges;
  edges.reserve(edge_count());
  std::vector<Edge> scratch(4096);
  auto cursor = source()->cursor();
  for (auto batch = cursor->next(scratch); !batch.empty(); batch = cursor->next(scratch)) {
    edges.insert(edges.end(), batch.begin(), batch.end());
  }
  return BipartiteGraph(n_a(), n_b(), std::move(edges));
}

HardInstance gen_hard_instance(std::uint32_t n) { return HardInstance(n); }

IndexExtremes check_index_extremes(const HardInstance& h, const AugmentationPass& pass) {
  IndexExtremes out;
  for (std::uint32_t i = 0; i < h.n(); ++i) {
    if (pass.left.partner(h.a_in(i)) != kNoVertex) {
      out.i_min = i;
      break;
    }
  }
  for (std::uint32_t i = h.n(); i-- > 0;) {
    if (pass.right.partner(h.b_in(i)) != kNoVertex) {
      out.i_max = i;
      break;
    }
  }
  if (out.i_min && out.i_max && *out.i_min <= *out.i_max) {
    out.augmentable = sampled_in_window(h, pass.sampled, *out.i_min, *out.i_max);
  }
  return out;
}

bool wings_monotone(const HardInstance& h, const AugmentationPass& pass) {
  // Walking sampled indices upwards, S_L coverage may only switch on and S_R
  // coverage may only switch off.
  bool left_on = false;
  bool right_off = false;
  for (std::uint32_t i = 0; i < h.n(); ++i) {
    if (!pass.sampled.contains({h.a_in(i), h.b_in(i)})) continue;
    const bool left = pass.left.partner(h.a_in(i)) != kNoVertex;
    const bool right = pass.right.partner(h.b_in(i)) != kNoVertex;
    if (left_on && !left) return false;
    if (right_off && right) return false;
    left_on = left_on || left;
    right_off = right_off || !right;
  }
  return true;
}

std::uint64_t sampled_in_window(const HardInstance& h, const Matching& sampled, std::uint32_t i,
                                std::uint32_t j) {
  std::uint64_t count = 0;
  for (std::uint32_t k = i; k <= j && k < h.n(); ++k) {
    if (sampled.contains({h.a_in(k), h.b_in(k)})) ++count;
  }
  return count;
}

PlantedInstance gen_random_planted(Vertex n, double extra_density, std::uint64_t seed) {
  if (!(extra_density >= 0.0 && extra_density <= 1.0)) {
    throw std::invalid_argument("extra density must lie in [0, 1]");
  }
  Rng rng(seed);
  std::vector<Vertex> perm(n);
  for (Vertex v = 0; v < n; ++v) perm[v] = v;
  shuffle(perm, rng);

  Matching planted(n, n);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n; ++a) {
    planted.add({a, perm[a]});
    edges.push_back({a, perm[a]});
  }
  if (extra_density > 0.0) {
    for (Vertex a = 0; a < n; ++a) {
      for (Vertex b = 0; b < n; ++b) {
        if (b != perm[a] && rng.bernoulli(extra_density)) edges.push_back({a, b});
      }
    }
  }
  shuffle(edges, rng);
  return {BipartiteGraph(n, n, std::move(edges)), std::move(planted)};
}

BipartiteGraph gen_random_bipartite(Vertex n_a, Vertex n_b, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Edge> edges;
  for (Vertex a = 0; a < n_a; ++a) {
    for (Vertex b = 0; b < n_b; ++b) {
      if (rng.bernoulli(density)) edges.push_back({a, b});
    }
  }
  shuffle(edges, rng);
  return BipartiteGraph(n_a, n_b, std::move(edges));
}

}  // namespace ssm
