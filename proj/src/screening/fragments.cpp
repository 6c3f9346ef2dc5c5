//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/screening/fragments.h"

#include <algorithm>
#include <map>
#include <set>

#include "pagforge/chem/aromaticity.h"
#include "pagforge/chem/canonical.h"
#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"

namespace pagforge::screen {
namespace {

using chem::BondOrder;
using chem::Molecule;

struct Env {
  const Molecule &mol;
  const std::vector<bool> &ring_bond;
  const std::vector<bool> &ring_atom;

  const chem::Atom &at(int i) const { return mol.atom(i); }
  bool aliphatic(int i, int z) const {
    return at(i).element == z && !at(i).aromatic;
  }
  bool aromatic(int i, int z) const {
    return at(i).element == z && at(i).aromatic;
  }
  int degree(int i) const { return mol.degree(i); }
  BondOrder order(const chem::Neighbor &nb) const {
    return mol.bond(nb.bond).order;
  }
  bool has_double_to(int i, int z) const {
    for (const auto &nb: mol.neighbors(i)) {
      if (order(nb) == BondOrder::kDouble && at(nb.atom).element == z)
        return true;
    }
    return false;
  }
  int double_count_to(int i, int z) const {
    int n = 0;
    for (const auto &nb: mol.neighbors(i))
      n += order(nb) == BondOrder::kDouble && at(nb.atom).element == z;
    return n;
  }
  bool has_double(int i) const {
    for (const auto &nb: mol.neighbors(i)) {
      if (order(nb) == BondOrder::kDouble)
        return true;
    }
    return false;
  }
  bool all_single(int i) const {
    for (const auto &nb: mol.neighbors(i)) {
      if (order(nb) != BondOrder::kSingle)
        return false;
    }
    return true;
  }
  template <class Pred>
  int count_neighbors(int i, Pred pred) const {
    int n = 0;
    for (const auto &nb: mol.neighbors(i))
      n += pred(nb) ? 1 : 0;
    return n;
  }
  bool is_any(int i, std::initializer_list<int> zs) const {
    return std::find(zs.begin(), zs.end(), at(i).element) != zs.end();
  }
};

bool env_l1(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon) || e.degree(i) != 3
      || !e.has_double_to(i, chem::kOxygen))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    BondOrder o = e.order(nb);
    return (o == BondOrder::kSingle || o == BondOrder::kAromatic)
           && e.is_any(nb.atom, { chem::kCarbon, chem::kNitrogen, chem::kOxygen });
  }) > 0;
}

bool env_l3(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kOxygen) || e.degree(i) != 2)
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle && !e.ring_bond[nb.bond]
           && e.at(nb.atom).element == chem::kCarbon;
  }) > 0;
}

bool env_l4(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon) || e.degree(i) == 1 || e.has_double(i))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle && !e.ring_bond[nb.bond]
           && e.at(nb.atom).element == chem::kCarbon;
  }) > 0;
}

bool env_l5(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kNitrogen) || e.degree(i) == 1 || e.has_double(i))
    return false;
  for (const auto &nb: e.mol.neighbors(i)) {
    if (e.order(nb) == BondOrder::kSingle
        && !e.is_any(nb.atom, { chem::kCarbon, chem::kSulfur }))
      return false;
    // Ring N bonded through the ring to a ring carbonyl carbon (lactam).
    if (e.ring_atom[i] && e.ring_bond[nb.bond] && e.aliphatic(nb.atom, chem::kCarbon)
        && e.ring_atom[nb.atom] && e.has_double_to(nb.atom, chem::kOxygen))
      return false;
  }
  return true;
}

bool env_l6(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon) || e.degree(i) != 3 || e.ring_atom[i]
      || !e.has_double_to(i, chem::kOxygen))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle && !e.ring_bond[nb.bond]
           && e.is_any(nb.atom, { chem::kCarbon, chem::kNitrogen, chem::kOxygen });
  }) > 0;
}

bool env_l7(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon) || (e.degree(i) != 2 && e.degree(i) != 3))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle
           && e.at(nb.atom).element == chem::kCarbon;
  }) > 0;
}

bool env_l8(const Env &e, int i) {
  return e.aliphatic(i, chem::kCarbon) && !e.ring_atom[i] && e.degree(i) != 1
         && e.all_single(i);
}

bool aromatic_of(const Env &e, int i, std::initializer_list<int> zs) {
  return e.at(i).aromatic && e.is_any(i, zs);
}

bool env_l9(const Env &e, int i) {
  if (!e.aromatic(i, chem::kNitrogen) || e.at(i).formal_charge != 0)
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kAromatic
           && aromatic_of(e, nb.atom, { chem::kCarbon, chem::kNitrogen,
                                        chem::kOxygen, chem::kSulfur });
  }) >= 2;
}

bool env_l10(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kNitrogen) || !e.ring_atom[i])
    return false;
  for (const auto &carbonyl: e.mol.neighbors(i)) {
    if (!e.ring_bond[carbonyl.bond] || !e.aliphatic(carbonyl.atom, chem::kCarbon)
        || !e.has_double_to(carbonyl.atom, chem::kOxygen))
      continue;
    for (const auto &other: e.mol.neighbors(i)) {
      if (other.atom != carbonyl.atom && e.ring_bond[other.bond]
          && !e.at(other.atom).aromatic
          && e.is_any(other.atom, { chem::kCarbon, chem::kNitrogen,
                                    chem::kOxygen, chem::kSulfur }))
        return true;
    }
  }
  return false;
}

bool env_l11(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kSulfur) || e.degree(i) != 2)
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle && !e.ring_bond[nb.bond]
           && e.at(nb.atom).element == chem::kCarbon;
  }) > 0;
}

bool env_l12(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kSulfur) || e.degree(i) != 4
      || e.double_count_to(i, chem::kOxygen) < 2)
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.at(nb.atom).element == chem::kCarbon;
  }) > 0;
}

bool env_l13(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon))
    return false;
  for (const auto &a: e.mol.neighbors(i)) {
    if (e.order(a) != BondOrder::kSingle || !e.ring_bond[a.bond]
        || e.at(a.atom).aromatic
        || !e.is_any(a.atom, { chem::kCarbon, chem::kNitrogen, chem::kOxygen,
                               chem::kSulfur }))
      continue;
    for (const auto &b: e.mol.neighbors(i)) {
      if (b.atom != a.atom && e.order(b) == BondOrder::kSingle
          && e.ring_bond[b.bond] && !e.at(b.atom).aromatic
          && e.is_any(b.atom, { chem::kNitrogen, chem::kOxygen, chem::kSulfur }))
        return true;
    }
  }
  return false;
}

bool env_l14(const Env &e, int i) {
  if (!e.aromatic(i, chem::kCarbon))
    return false;
  for (const auto &a: e.mol.neighbors(i)) {
    if (e.order(a) != BondOrder::kAromatic
        || !aromatic_of(e, a.atom, { chem::kCarbon, chem::kNitrogen,
                                     chem::kOxygen, chem::kSulfur }))
      continue;
    for (const auto &b: e.mol.neighbors(i)) {
      if (b.atom != a.atom && e.order(b) == BondOrder::kAromatic
          && aromatic_of(e, b.atom, { chem::kNitrogen, chem::kOxygen,
                                      chem::kSulfur }))
        return true;
    }
  }
  return false;
}

bool env_l15(const Env &e, int i) {
  if (!e.aliphatic(i, chem::kCarbon))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kSingle && e.ring_bond[nb.bond]
           && e.aliphatic(nb.atom, chem::kCarbon);
  }) >= 2;
}

bool env_l16(const Env &e, int i) {
  if (!e.aromatic(i, chem::kCarbon))
    return false;
  return e.count_neighbors(i, [&](const chem::Neighbor &nb) {
    return e.order(nb) == BondOrder::kAromatic
           && e.aromatic(nb.atom, chem::kCarbon);
  }) >= 2;
}

struct Rule {
  const char *a;
  const char *b;
  BondOrder order;
};

constexpr BondOrder kS = BondOrder::kSingle;

const std::vector<Rule> &rule_table() {
  static const std::vector<Rule> kRules {
    { "1", "3", kS },   { "1", "5", kS },   { "1", "10", kS },
    { "3", "4", kS },   { "3", "13", kS },  { "3", "14", kS },
    { "3", "15", kS },  { "3", "16", kS },  { "4", "5", kS },
    { "4", "11", kS },  { "5", "12", kS },  { "5", "14", kS },
    { "5", "16", kS },  { "5", "13", kS },  { "5", "15", kS },
    { "6", "13", kS },  { "6", "14", kS },  { "6", "15", kS },
    { "6", "16", kS },  { "7a", "7b", BondOrder::kDouble },
    { "8", "9", kS },   { "8", "10", kS },  { "8", "13", kS },
    { "8", "14", kS },  { "8", "15", kS },  { "8", "16", kS },
    { "9", "13", kS },  { "9", "14", kS },  { "9", "15", kS },
    { "9", "16", kS },  { "10", "13", kS }, { "10", "14", kS },
    { "10", "15", kS }, { "10", "16", kS }, { "11", "13", kS },
    { "11", "14", kS }, { "11", "15", kS }, { "11", "16", kS },
    { "13", "14", kS }, { "13", "15", kS }, { "13", "16", kS },
    { "14", "14", kS }, { "14", "15", kS }, { "14", "16", kS },
    { "15", "16", kS }, { "16", "16", kS },
  };
  return kRules;
}

std::vector<std::vector<std::string>> all_labels(const Molecule &mol) {
  auto rb = chem::ring_bonds(mol);
  auto ra = chem::ring_atoms(mol);
  Env e { mol, rb, ra };
  std::vector<std::vector<std::string>> out(mol.num_atoms());
  using Pred = bool (*)(const Env &, int);
  static const std::pair<const char *, Pred> kEnvs[] = {
    { "1", env_l1 },   { "3", env_l3 },   { "4", env_l4 },   { "5", env_l5 },
    { "6", env_l6 },   { "7a", env_l7 },  { "7b", env_l7 },  { "8", env_l8 },
    { "9", env_l9 },   { "10", env_l10 }, { "11", env_l11 }, { "12", env_l12 },
    { "13", env_l13 }, { "14", env_l14 }, { "15", env_l15 }, { "16", env_l16 },
  };
  for (int i = 0; i < mol.num_atoms(); ++i) {
    for (const auto &[name, pred]: kEnvs) {
      if (pred(e, i))
        out[i].emplace_back(name);
    }
  }
  return out;
}

bool has(const std::vector<std::string> &labels, const char *l) {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

Molecule with_kekule_bonds(const Molecule &mol) {
  bool any = std::any_of(mol.atoms().begin(), mol.atoms().end(),
                         [](const chem::Atom &a) { return a.aromatic; });
  return any ? chem::kekulize(mol) : mol;
}

} // namespace

std::vector<std::string> brics_labels(const Molecule &mol, int i) {
  return all_labels(mol).at(i);
}

std::vector<int> brics_bonds(const Molecule &mol) {
  auto labels = all_labels(mol);
  auto rb = chem::ring_bonds(mol);
  std::vector<int> out;
  for (int b = 0; b < mol.num_bonds(); ++b) {
    if (rb[b])
      continue;
    const chem::Bond &bond = mol.bond(b);
    for (const Rule &r: rule_table()) {
      if (bond.order != r.order)
        continue;
      if ((has(labels[bond.a], r.a) && has(labels[bond.b], r.b))
          || (has(labels[bond.a], r.b) && has(labels[bond.b], r.a))) {
        out.push_back(b);
        break;
      }
    }
  }
  return out;
}

Molecule cut_bonds(const Molecule &mol, const std::vector<int> &bonds) {
  Molecule kek = with_kekule_bonds(mol);
  std::set<int> cut(bonds.begin(), bonds.end());
  Molecule out;
  for (const auto &a: kek.atoms())
    out.add_atom(a);
  for (int b = 0; b < kek.num_bonds(); ++b) {
    const chem::Bond &bond = kek.bond(b);
    if (!cut.count(b)) {
      out.add_bond(bond.a, bond.b, bond.order);
      continue;
    }
    int valence = chem::valence_contribution(bond.order);
    out.atom(bond.a).hydrogens += valence;
    out.atom(bond.b).hydrogens += valence;
  }
  chem::perceive_aromaticity(out);
  if (mol.id())
    out.set_id(*mol.id());
  return out;
}

std::vector<Molecule> brics_fragments(const Molecule &mol) {
  auto bonds = brics_bonds(mol);
  if (bonds.empty())
    return { mol };
  Molecule cut = cut_bonds(mol, bonds);
  std::map<std::string, Molecule> unique;
  for (const auto &comp: cut.components()) {
    Molecule frag = cut.subgraph(comp);
    unique.emplace(chem::canonical_smiles(frag), std::move(frag));
  }
  std::vector<Molecule> out;
  for (auto &[smi, frag]: unique)
    out.push_back(std::move(frag));
  return out;
}

std::vector<std::string> brics_fragment_smiles(const Molecule &mol) {
  std::vector<std::string> out;
  for (const auto &f: brics_fragments(mol))
    out.push_back(chem::canonical_smiles(f));
  return out;
}

Molecule murcko_scaffold(const Molecule &mol) {
  Molecule kek = with_kekule_bonds(mol);
  auto in_ring = chem::ring_atoms(kek);
  int n = kek.num_atoms();
  std::vector<bool> removed(n, false);
  std::vector<int> degree(n);
  std::vector<int> extra_h(n, 0);
  for (int i = 0; i < n; ++i)
    degree[i] = kek.degree(i);

  std::vector<int> queue;
  for (int i = 0; i < n; ++i) {
    if (!in_ring[i] && degree[i] <= 1)
      queue.push_back(i);
  }
  while (!queue.empty()) {
    int i = queue.back();
    queue.pop_back();
    if (removed[i])
      continue;
    removed[i] = true;
    for (const auto &nb: kek.neighbors(i)) {
      if (removed[nb.atom])
        continue;
      extra_h[nb.atom] += chem::valence_contribution(kek.bond(nb.bond).order);
      if (--degree[nb.atom] <= 1 && !in_ring[nb.atom])
        queue.push_back(nb.atom);
    }
  }

  std::vector<int> keep;
  for (int i = 0; i < n; ++i) {
    if (!removed[i])
      keep.push_back(i);
  }
  Molecule scaffold = kek.subgraph(keep);
  for (std::size_t k = 0; k < keep.size(); ++k)
    scaffold.atom(static_cast<int>(k)).hydrogens += extra_h[keep[k]];
  chem::perceive_aromaticity(scaffold);
  return scaffold;
}

} // namespace pagforge::screen
