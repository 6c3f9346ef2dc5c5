//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/descriptors/fingerprint.h"

#include <algorithm>
#include <bit>

#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"
#include "pagforge/util/error.h"
#include "pagforge/util/rng.h"

namespace pagforge::desc {
namespace {

std::uint64_t combine(std::uint64_t seed, std::uint64_t value) {
  return mix64(seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6)
                       + (seed >> 2)));
}

} // namespace

Fingerprint::Fingerprint(int width, int radius)
    : width_(width), radius_(radius) {
  if (width <= 0 || !std::has_single_bit(static_cast<unsigned>(width)))
    throw InvalidArgument("fingerprint width must be a power of two, got "
                          + std::to_string(width));
  words_.assign((width + 63) / 64, 0);
}

int Fingerprint::popcount() const {
  int n = 0;
  for (auto w: words_)
    n += std::popcount(w);
  return n;
}

std::vector<int> Fingerprint::on_bits() const {
  std::vector<int> out;
  for (int i = 0; i < width_; ++i) {
    if (test(i))
      out.push_back(i);
  }
  return out;
}

std::vector<std::uint64_t> morgan_environments(const chem::Molecule &mol,
                                               int radius) {
  int n = mol.num_atoms();
  auto in_ring = chem::ring_atoms(mol);
  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    const chem::Atom &a = mol.atom(i);
    int heavy = 0;
    for (const auto &nb: mol.neighbors(i))
      heavy += mol.atom(nb.atom).element != chem::kHydrogen;
    std::uint64_t h = 0x5bd1e995ULL;
    for (std::uint64_t v:
         { std::uint64_t(a.element), std::uint64_t(heavy),
           std::uint64_t(a.hydrogens), std::uint64_t(a.formal_charge + 16),
           std::uint64_t(in_ring[i]), std::uint64_t(a.aromatic) })
      h = combine(h, v);
    ids[i] = h;
  }

  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(n) * (radius + 1));
  std::vector<std::vector<std::uint64_t>> per_atom(n);
  for (int i = 0; i < n; ++i)
    per_atom[i].push_back(ids[i]);

  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, std::uint64_t>> env;
      for (const auto &nb: mol.neighbors(i))
        env.emplace_back(static_cast<int>(mol.bond(nb.bond).order),
                         ids[nb.atom]);
      std::sort(env.begin(), env.end());
      std::uint64_t h = combine(static_cast<std::uint64_t>(r), ids[i]);
      for (auto [order, id]: env) {
        h = combine(h, static_cast<std::uint64_t>(order));
        h = combine(h, id);
      }
      next[i] = h;
      per_atom[i].push_back(h);
    }
    ids.swap(next);
  }
  for (const auto &v: per_atom)
    out.insert(out.end(), v.begin(), v.end());
  return out;
}

Fingerprint morgan_fingerprint(const chem::Molecule &mol, int radius,
                               int width) {
  Fingerprint fp(width, radius);
  auto mask = static_cast<std::uint64_t>(width - 1);
  for (auto id: morgan_environments(mol, radius))
    fp.set(static_cast<int>(id & mask));
  return fp;
}

Overlap overlap(const Fingerprint &a, const Fingerprint &b) {
  if (a.width() != b.width())
    throw InvalidArgument("fingerprint width mismatch: "
                          + std::to_string(a.width()) + " vs "
                          + std::to_string(b.width()));
  Overlap o { 0, 0, 0 };
  const auto &wa = a.words();
  const auto &wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) {
    o.both += std::popcount(wa[i] & wb[i]);
    o.a += std::popcount(wa[i]);
    o.b += std::popcount(wb[i]);
  }
  return o;
}

double tanimoto(const Fingerprint &a, const Fingerprint &b) {
  Overlap o = overlap(a, b);
  int uni = o.a + o.b - o.both;
  return uni == 0 ? 0.0 : static_cast<double>(o.both) / uni;
}

double dice(const Fingerprint &a, const Fingerprint &b) {
  Overlap o = overlap(a, b);
  int sum = o.a + o.b;
  return sum == 0 ? 0.0 : 2.0 * o.both / sum;
}

double similarity(const Fingerprint &a, const Fingerprint &b,
                  SimilarityKind kind) {
  return kind == SimilarityKind::kDice ? dice(a, b) : tanimoto(a, b);
}

} // namespace pagforge::desc
