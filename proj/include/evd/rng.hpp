#pragma once

#include "evd/numeric.hpp"

#include <cstdint>

namespace evd {

/// SplitMix64 finaliser. Public so tests can pin the stream to published values.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: word i of stream s under seed x is
/// mix(key(x, s) + (i + 1) * golden), with key(x, s) = mix(x ^ mix(s + golden)).
/// Any (seed, stream, counter) triple can be replayed without generating the
/// words before it, which is what makes sharded sampling thread-count independent.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t counter = 0) noexcept
      : key_(splitmix64_mix(seed ^ splitmix64_mix(stream + kGolden))), counter_(counter) {}

  std::uint64_t next() noexcept { return splitmix64_mix(key_ + (++counter_) * kGolden); }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Uniform on [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) noexcept;
  /// Uniform on [lo, hi] for arbitrary-precision endpoints (lo <= hi).
  Integer between(const Integer& lo, const Integer& hi);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace evd
