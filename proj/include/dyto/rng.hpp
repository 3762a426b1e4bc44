// Copyright 2026 The dyto Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dyto {

/// Counter-based generator: output i is the SplitMix64 finalizer applied to
/// key + (i + 1) * golden. Output i of key k equals the i-th draw of a
/// sequential SplitMix64 seeded with k, so any language with 64-bit wrapping
/// arithmetic reproduces the stream. Test vectors: tests/unit/test_rng.cpp.
class CounterRng {
 public:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  constexpr explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream for a (seed, stream id) pair.
  static constexpr CounterRng derive(std::uint64_t seed, std::uint64_t stream) {
    return CounterRng(mix(seed ^ mix((stream + 1) * kGolden)));
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  constexpr std::uint64_t key() const { return key_; }

  constexpr std::uint64_t bits(std::uint64_t counter) const {
    return mix(key_ + (counter + 1) * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by multiply-shift; bound > 0.
  constexpr std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(counter)) * bound) >> 64);
  }

  /// Standard normal via Box-Muller (cosine branch), consuming counters 2i, 2i+1.
  double normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

}  // namespace dyto
