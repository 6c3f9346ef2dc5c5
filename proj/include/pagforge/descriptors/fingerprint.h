//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_DESCRIPTORS_FINGERPRINT_H_
#define PAGFORGE_DESCRIPTORS_FINGERPRINT_H_

#include <cstdint>
#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::desc {

inline constexpr int kDefaultRadius = 2;
inline constexpr int kDefaultWidth = 2048;

/// Fixed-width bit vector. The width is always a power of two.
class Fingerprint {
public:
  Fingerprint() = default;
  // Throws InvalidArgument when width is not a positive power of two.
  explicit Fingerprint(int width, int radius = kDefaultRadius);

  int width() const { return width_; }
  int radius() const { return radius_; }

  void set(int bit) { words_[bit >> 6] |= std::uint64_t { 1 } << (bit & 63); }
  bool test(int bit) const { return (words_[bit >> 6] >> (bit & 63)) & 1U; }
  int popcount() const;
  const std::vector<std::uint64_t> &words() const { return words_; }

  // Indices of the set bits in ascending order.
  std::vector<int> on_bits() const;

  bool operator==(const Fingerprint &other) const = default;

private:
  int width_ = 0;
  int radius_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Unfolded circular environment identifiers for radii 0..radius, one per
/// (atom, radius) pair, in atom-major order. Identifiers depend only on the
/// graph, never on atom numbering.
std::vector<std::uint64_t> morgan_environments(const chem::Molecule &mol,
                                               int radius);

Fingerprint morgan_fingerprint(const chem::Molecule &mol,
                               int radius = kDefaultRadius,
                               int width = kDefaultWidth);

enum class SimilarityKind { kTanimoto, kDice };

// |a & b| / |a | b|; 0 when both are empty. Throws on width mismatch.
double tanimoto(const Fingerprint &a, const Fingerprint &b);
// 2|a & b| / (|a| + |b|); 0 when both are empty. Throws on width mismatch.
double dice(const Fingerprint &a, const Fingerprint &b);
double similarity(const Fingerprint &a, const Fingerprint &b,
                  SimilarityKind kind);
inline double dice_distance(const Fingerprint &a, const Fingerprint &b) {
  return 1.0 - dice(a, b);
}

// Popcounts needed by both coefficients: |a & b| and |a|, |b|.
struct Overlap {
  int both;
  int a;
  int b;
};
Overlap overlap(const Fingerprint &a, const Fingerprint &b);

} // namespace pagforge::desc

#endif // PAGFORGE_DESCRIPTORS_FINGERPRINT_H_
