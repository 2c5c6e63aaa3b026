#pragma once

#include <cstdint>
#include <random>

namespace ssm {

/// splitmix64 finaliser, used to derive independent seeds from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  return mix_seed(base ^ mix_seed(stream + 0x632be59bd9b4e019ull));
}

/// Seeded 64-bit generator. Only the raw engine output is used (no std
/// distributions), so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle driven by Rng.
template <class Range>
void shuffle(Range& range, Rng& rng) {
  using std::swap;
  const auto n = static_cast<std::uint64_t>(range.size());
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    swap(range[i - 1], range[j]);
  }
}

}  // namespace ssm
