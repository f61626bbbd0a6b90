#pragma once

#include <array>
#include <cstdint>

namespace descentlab {

/// SplitMix64 finalizer:
///   z += 0x9E3779B97F4A7C15
///   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
///   return z ^ (z >> 31)
/// Used both to expand a seed into generator state and to derive replica seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed for replica `index` of a run seeded with `seed`:
///   s = seed; a = splitmix64(s)            (first output of the seed's stream)
///   r = index ^ a;  return splitmix64(r)
/// Distinct indices give distinct, decorrelated seeds; the value depends only
/// on (seed, index), never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t s = seed;
  std::uint64_t r = index ^ splitmix64(s);
  return splitmix64(r);
}

/// xoshiro256** 1.0 (Blackman & Vigna), state expanded from a 64-bit seed by
/// four successive SplitMix64 outputs.
///
/// Update, with rotl(x, k) = (x << k) | (x >> (64 - k)):
///   out = rotl(s1 * 5, 7) * 9
///   t = s1 << 17
///   s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
///
/// Integer draws use Lemire's multiply-and-reject, so bounded integers are
/// exactly uniform and the whole stream is bit-reproducible on any platform.
/// A stream is single-owner mutable state.
class RandomStream {
 public:
  explicit constexpr RandomStream(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static constexpr RandomStream for_replica(std::uint64_t seed, std::uint64_t index) noexcept {
    return RandomStream(derive_seed(seed, index));
  }

  constexpr std::uint64_t next() noexcept {
    const std::uint64_t out = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return out;
  }

  /// Uniform integer in [0, bound); bound must be positive.
  constexpr std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace descentlab
