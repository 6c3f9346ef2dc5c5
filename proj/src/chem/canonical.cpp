//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/canonical.h"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "pagforge/chem/rings.h"
#include "pagforge/chem/smiles.h"

namespace pagforge::chem {
namespace {

using Signature = std::vector<long long>;

// Dense ranks from per-atom signatures: equal signatures share a rank.
int dense_ranks(const std::vector<Signature> &sigs, std::vector<int> &ranks) {
  int n = static_cast<int>(sigs.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int l, int r) { return sigs[l] < sigs[r]; });
  ranks.assign(n, 0);
  int classes = 0;
  for (int k = 0; k < n; ++k) {
    if (k > 0 && sigs[order[k]] != sigs[order[k - 1]])
      ++classes;
    ranks[order[k]] = classes;
  }
  return n == 0 ? 0 : classes + 1;
}

int refine(const Molecule &mol, std::vector<int> &ranks, int classes) {
  int n = mol.num_atoms();
  while (true) {
    std::vector<Signature> sigs(n);
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<int, int>> env;
      for (const Neighbor &nb: mol.neighbors(i))
        env.emplace_back(ranks[nb.atom], static_cast<int>(mol.bond(nb.bond).order));
      std::sort(env.begin(), env.end());
      Signature &s = sigs[i];
      s.push_back(ranks[i]);
      for (auto [r, o]: env) {
        s.push_back(r);
        s.push_back(o);
      }
    }
    std::vector<int> next;
    int next_classes = dense_ranks(sigs, next);
    ranks.swap(next);
    if (next_classes == classes)
      return classes;
    classes = next_classes;
  }
}

} // namespace

std::vector<int> canonical_ranks(const Molecule &mol) {
  int n = mol.num_atoms();
  auto in_ring = ring_atoms(mol);
  std::vector<Signature> init(n);
  for (int i = 0; i < n; ++i) {
    const Atom &a = mol.atom(i);
    init[i] = { a.element, mol.degree(i), a.hydrogens, a.formal_charge,
                a.aromatic ? 1 : 0, in_ring[i] ? 1 : 0 };
  }
  std::vector<int> ranks;
  int classes = dense_ranks(init, ranks);
  classes = refine(mol, ranks, classes);

  while (classes < n) {
    // Lowest rank shared by several atoms; promote its lowest-index member.
    std::vector<int> count(n, 0);
    for (int r: ranks)
      ++count[r];
    int tied = 0;
    while (count[tied] < 2)
      ++tied;
    int pick = -1;
    for (int i = 0; i < n && pick < 0; ++i) {
      if (ranks[i] == tied)
        pick = i;
    }
    std::vector<Signature> sigs(n);
    for (int i = 0; i < n; ++i)
      sigs[i] = { ranks[i], (ranks[i] == tied && i != pick) ? 1 : 0 };
    classes = dense_ranks(sigs, ranks);
    classes = refine(mol, ranks, classes);
  }
  return ranks;
}

std::string canonical_smiles(const Molecule &mol) {
  if (mol.empty())
    return "";
  auto ranks = canonical_ranks(mol);
  std::vector<std::string> parts;
  for (const auto &comp: mol.components()) {
    Molecule sub = mol.subgraph(comp);
    std::vector<int> sub_ranks;
    for (int i: comp)
      sub_ranks.push_back(ranks[i]);
    parts.push_back(write_smiles(sub, sub_ranks));
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto &p: parts) {
    if (!out.empty())
      out += '.';
    out += p;
  }
  return out;
}

} // namespace pagforge::chem
