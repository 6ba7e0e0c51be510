#pragma once

#include <cmath>
#include <cstdint>

namespace mlsg {

/// SplitMix64 pseudo-random generator (Steele, Lea & Flood 2014).
///
/// Chosen because streams are trivially derivable: mixing extra words into
/// the seed yields an independent stream, so walk w of node v can draw from
/// a generator seeded by (seed, v, w) and the result is identical no matter
/// how work is scheduled across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  /// Derive an independent stream from (seed, a, b).
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    SplitMix64 outer(seed);
    std::uint64_t s = outer.next_u64();
    s ^= mix(a + 0x9e3779b97f4a7c15ULL);
    s ^= mix(b + 0xbf58476d1ce4e5b9ULL);
    return SplitMix64(s);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix(z);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) via rejection-free scaling (bound <= 2^32).
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(bound));
  }

  /// Uniform double in [lo, hi).
  double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Standard normal via Box-Muller (one value per call, no caching).
  double next_normal() {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace mlsg
