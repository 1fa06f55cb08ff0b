// SPDX-License-Identifier: Apache-2.0
//
// Seeded random streams with pinned, platform-independent output.
//
// std::normal_distribution and std::uniform_int_distribution are
// implementation-defined, so everything here is built directly on the raw
// mt19937_64 word stream: uniforms take the top 53 bits, complex normals use
// the polar transform, bounded integers use rejection sampling.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "mcbeam/types.hpp"

namespace mcbeam {

// SplitMix64 output `stream` of the sequence seeded with `master`. Used to
// hand trials, methods, and randomization candidates their own independent
// streams, keyed by position instead of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Standard real normal (Box-Muller).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Circularly symmetric complex normal, E|x|^2 = 1.
  Complex cnormal() {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log1p(-u1));
    return std::polar(r, 2.0 * std::numbers::pi * u2);
  }

  // Unbiased uniform integer on [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = (UINT64_MAX / bound) * bound;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x < limit) return x % bound;
    }
  }

  // Sorted sample of `count` distinct indices from {0, ..., population-1}.
  std::vector<int> sample_indices(int population, int count);

 private:
  std::mt19937_64 engine_;
};

inline std::vector<int> Rng::sample_indices(int population, int count) {
  if (population < 1 || count < 1 || count > population)
    throw dimension_error("sample_indices: need 1 <= count <= population");
  std::vector<int> pool(population);
  for (int i = 0; i < population; ++i) pool[i] = i;
  for (int i = 0; i < count; ++i) {
    const int j = i + static_cast<int>(below(population - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace mcbeam
