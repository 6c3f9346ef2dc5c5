//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_UTIL_RNG_H_
#define PAGFORGE_UTIL_RNG_H_

#include <cstdint>
#include <string_view>
#include <vector>

namespace pagforge {

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based random stream. The n-th output is a pure function of
/// (seed, stream, n), so independent lanes never share state and results
/// do not depend on thread scheduling. All distributions are implemented
/// here rather than through <random> so that sequences are identical across
/// standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key_(mix64(seed ^ mix64(stream + 0x632be59bd9b4e019ULL))) { }

  std::uint64_t next_u64() noexcept { return mix64(key_ ^ mix64(counter_++)); }

  // Uniform on [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() noexcept;

  // Unbiased integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  // Index drawn with probability proportional to weights (non-negative,
  // positive sum).
  std::size_t categorical(const std::vector<double> &weights) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// In-place Fisher-Yates shuffle.
template <class T>
void shuffle(std::vector<T> &v, Rng &rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
}

// Derives a child seed for a named stage: first 8 bytes (little-endian) of
// SHA-256("<master>:<name>").
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

} // namespace pagforge

#endif // PAGFORGE_UTIL_RNG_H_
