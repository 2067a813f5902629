#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace addrbench {

// Default seed used by every CLI command unless --seed or --entropy is given.
inline constexpr std::uint64_t kDefaultSeed = 0xADD2E55ULL;

// Deterministic stream of uniform draws (splitmix64). Streams are derived
// from (seed, stream id) so per-record corruption is reproducible no matter
// which order or worker processes the records. We roll our own draw
// functions instead of <random> distributions because the standard ones are
// not byte-stable across library implementations.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : state_(seed ^ kGolden) { next_u64(); }

  RandomSource(std::uint64_t seed, std::string_view stream_id)
      : state_(seed ^ fnv1a(stream_id)) {
    next_u64();
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n); n must be nonzero.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1).
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform_real() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      using std::swap;
      swap(v[i - 1], v[uniform_index(i)]);
    }
  }

  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001B3ULL;
    }
    return h;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace addrbench
