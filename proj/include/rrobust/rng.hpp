#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace rrobust {

// SplitMix64 finalizer. Used to derive independent substream seeds from a
// master seed and stream indices.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(a + 0x632BE59BD9B4E019ULL));
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return substream_seed(substream_seed(seed, a), b);
}

/// Seeded 64-bit Mersenne Twister (std::mt19937_64) with portable bounded
/// draws. The standard distributions are implementation-defined, so all
/// integer and real draws are derived from the raw engine output here to keep
/// results identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (std::numeric_limits<std::uint64_t>::max() - bound + 1) % bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rrobust
