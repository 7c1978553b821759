// Copyright Contributors to the rgbd-augment Project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rgbda::rng {

// mt19937_64 output is fully specified by the standard; the helpers below
// avoid std::uniform_*_distribution, whose sequences are implementation
// defined, so every draw is bit-reproducible across platforms.

/// Uniform double in [0, 1) with 53 random bits.
inline double unit(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Uniform double in [-range, range].
inline double symmetric(std::mt19937_64& engine, double range) {
  return (2.0 * unit(engine) - 1.0) * range;
}

/// Unbiased uniform integer in [0, n) via rejection sampling. n must be > 0.
inline uint64_t bounded(std::mt19937_64& engine, uint64_t n) {
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

/// Stable seed derivation: FNV-1a over (seed, label) with a splitmix64
/// finalizer. Used to give each pipeline stage / cap an independent stream.
inline uint64_t derive_seed(uint64_t seed, std::string_view label) {
  uint64_t h = 0xcbf29ce484222325ULL;
  const auto mix_byte = [&h](uint8_t byte) {
    h ^= byte;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<uint8_t>(seed >> (8 * i)));
  for (char c : label) mix_byte(static_cast<uint8_t>(c));
  h += 0x9e3779b97f4a7c15ULL;
  h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
  h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
  return h ^ (h >> 31);
}

}  // namespace rgbda::rng
