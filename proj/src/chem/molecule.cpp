//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/molecule.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "pagforge/chem/element.h"
#include "pagforge/util/error.h"

namespace pagforge::chem {

int Molecule::add_atom(Atom atom) {
  atom.index = num_atoms();
  atoms_.push_back(atom);
  adj_.emplace_back();
  return atom.index;
}

int Molecule::add_bond(int a, int b, BondOrder order) {
  if (a == b)
    throw InvalidArgument("bond from atom " + std::to_string(a) + " to itself");
  if (a < 0 || b < 0 || a >= num_atoms() || b >= num_atoms())
    throw InvalidArgument("bond endpoint out of range");
  if (bond_between(a, b) >= 0)
    throw InvalidArgument("duplicate bond between atoms " + std::to_string(a)
                          + " and " + std::to_string(b));
  int idx = num_bonds();
  bonds_.push_back({ a, b, order });
  adj_[a].push_back({ b, idx });
  adj_[b].push_back({ a, idx });
  return idx;
}

int Molecule::bond_between(int a, int b) const {
  for (const Neighbor &n: adj_[a]) {
    if (n.atom == b)
      return n.bond;
  }
  return -1;
}

int Molecule::bond_order_sum(int i) const {
  int sum = 0;
  for (const Neighbor &n: adj_[i])
    sum += valence_contribution(bonds_[n.bond].order);
  return sum;
}

std::vector<std::vector<int>> Molecule::components() const {
  std::vector<int> comp(num_atoms(), -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < num_atoms(); ++s) {
    if (comp[s] >= 0)
      continue;
    int c = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<int> stack { s };
    comp[s] = c;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[c].push_back(u);
      for (const Neighbor &n: adj_[u]) {
        if (comp[n.atom] < 0) {
          comp[n.atom] = c;
          stack.push_back(n.atom);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

Molecule Molecule::subgraph(const std::vector<int> &atoms) const {
  Molecule sub;
  std::vector<int> map(num_atoms(), -1);
  for (int old: atoms)
    map[old] = sub.add_atom(atoms_[old]);
  for (const Bond &b: bonds_) {
    if (map[b.a] >= 0 && map[b.b] >= 0)
      sub.add_bond(map[b.a], map[b.b], b.order);
  }
  sub.id_ = id_;
  return sub;
}

Molecule Molecule::permuted(const std::vector<int> &order) const {
  if (static_cast<int>(order.size()) != num_atoms())
    throw InvalidArgument("permutation size mismatch");
  Molecule out;
  std::vector<int> map(num_atoms(), -1);
  for (int i = 0; i < num_atoms(); ++i)
    map[order[i]] = out.add_atom(atoms_[order[i]]);
  // Bonds in an order induced by the permutation as well.
  std::vector<int> bond_idx(num_bonds());
  std::iota(bond_idx.begin(), bond_idx.end(), 0);
  auto key = [&](int bi) {
    int x = map[bonds_[bi].a], y = map[bonds_[bi].b];
    return std::make_pair(std::min(x, y), std::max(x, y));
  };
  std::sort(bond_idx.begin(), bond_idx.end(),
            [&](int l, int r) { return key(l) < key(r); });
  for (int bi: bond_idx)
    out.add_bond(map[bonds_[bi].a], map[bonds_[bi].b], bonds_[bi].order);
  out.id_ = id_;
  return out;
}

int Molecule::heavy_atom_count() const {
  return static_cast<int>(
      std::count_if(atoms_.begin(), atoms_.end(),
                    [](const Atom &a) { return a.element != kHydrogen; }));
}

int net_charge(const Molecule &mol) {
  int q = 0;
  for (const Atom &a: mol.atoms())
    q += a.formal_charge;
  return q;
}

std::vector<int> component_charges(const Molecule &mol) {
  std::vector<int> out;
  for (const auto &comp: mol.components()) {
    int q = 0;
    for (int i: comp)
      q += mol.atom(i).formal_charge;
    out.push_back(q);
  }
  return out;
}

} // namespace pagforge::chem
