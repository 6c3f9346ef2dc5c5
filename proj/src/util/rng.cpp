//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/util/rng.h"

#include <cmath>
#include <numbers>
#include <string>

#include "pagforge/util/hash.h"

namespace pagforge {

double Rng::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform_open(), u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Rejection on the top of the range keeps the result unbiased.
  std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

std::size_t Rng::categorical(const std::vector<double> &weights) noexcept {
  double total = 0.0;
  for (double w: weights)
    total += w;
  double target = uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (target < acc)
      return i;
  }
  // Rounding can leave target == total; fall back to the last positive weight.
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0)
      return i - 1;
  }
  return 0;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  std::string msg = std::to_string(master);
  msg.push_back(':');
  msg.append(name);
  auto digest = sha256(msg);
  std::uint64_t seed = 0;
  for (int i = 7; i >= 0; --i)
    seed = (seed << 8) | digest[i];
  return seed;
}

} // namespace pagforge
