#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace reviewaudit {

// Deterministic generator with a pinned algorithm so that seeded runs produce
// identical output on every platform (std::uniform_int_distribution is
// implementation-defined and would break byte-exact reports).
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw in [0, bound) via rejection sampling.
  std::uint64_t next_below(std::uint64_t bound) {
    if (bound == 0) return 0;
    const std::uint64_t threshold = (~bound + 1) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1) with 53 bits of entropy.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // First `count` positions of a Fisher-Yates shuffle over [0, universe):
  // a uniform sample without replacement.
  std::vector<std::size_t> sample_without_replacement(std::size_t count, std::size_t universe) {
    if (count > universe) count = universe;
    std::vector<std::size_t> pool(universe);
    for (std::size_t i = 0; i < universe; ++i) pool[i] = i;
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(next_below(universe - i));
      std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
  }

private:
  std::uint64_t state_;
};

inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Stable sub-seed for a named component, so that one manifest seed drives
// every stochastic stage without correlated streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  SplitMix64 mixer(seed ^ fnv1a64(label));
  return mixer.next();
}

}  // namespace reviewaudit
