//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/aromaticity.h"

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"

namespace pagforge::chem {
namespace {

// True when an aromatic atom still lacks its pi bond, i.e. the Kekulé
// structure must give it one double bond.
bool needs_double_bond(const Molecule &mol, int i) {
  const Atom &a = mol.atom(i);
  int current = mol.bond_order_sum(i) + a.hydrogens;
  auto valences = allowed_valences(a.element, a.formal_charge);
  for (int v: valences) {
    if (v >= current)
      return v > current;
  }
  return false;
}

class Matcher {
public:
  Matcher(const Molecule &mol, const std::vector<bool> &needy)
      : mol_(mol), needy_(needy), mate_(mol.num_atoms(), -1) { }

  bool solve(const std::vector<int> &atoms) {
    std::vector<int> open;
    for (int a: atoms) {
      if (needy_[a] && mate_[a] < 0)
        open.push_back(a);
    }
    if (open.empty())
      return true;

    // Most constrained atom first keeps the search shallow.
    int best = -1;
    std::vector<int> best_opts;
    for (int a: open) {
      auto opts = options(a);
      if (best < 0 || opts.size() < best_opts.size()) {
        best = a;
        best_opts = std::move(opts);
        if (best_opts.empty())
          return false;
      }
    }
    for (int b: best_opts) {
      mate_[best] = b;
      mate_[b] = best;
      if (solve(atoms))
        return true;
      mate_[best] = -1;
      mate_[b] = -1;
    }
    return false;
  }

  int mate(int a) const { return mate_[a]; }

private:
  std::vector<int> options(int a) const {
    std::vector<int> out;
    for (const Neighbor &nb: mol_.neighbors(a)) {
      if (mol_.bond(nb.bond).order == BondOrder::kAromatic && needy_[nb.atom]
          && mate_[nb.atom] < 0)
        out.push_back(nb.atom);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  const Molecule &mol_;
  const std::vector<bool> &needy_;
  std::vector<int> mate_;
};

// Pi electrons contributed by atom i to cycle members; -1 when the atom
// cannot take part in an aromatic cycle.
int pi_electrons(const Molecule &mol, int i, const std::vector<bool> &in_cycle,
                 const std::vector<bool> &in_ring) {
  const Atom &a = mol.atom(i);
  switch (a.element) {
  case kBoron:
  case kCarbon:
  case kNitrogen:
  case kOxygen:
  case kPhosphorus:
  case kSulfur:
  case 34:  // Se
    break;
  default:
    return -1;
  }

  int connections = mol.degree(i) + a.hydrogens;
  if (connections > 3)
    return -1;

  int doubles = 0;
  int partner = -1;
  for (const Neighbor &nb: mol.neighbors(i)) {
    BondOrder o = mol.bond(nb.bond).order;
    if (o == BondOrder::kTriple)
      return -1;
    if (o == BondOrder::kDouble) {
      ++doubles;
      partner = nb.atom;
    }
  }
  if (doubles > 1)
    return -1;
  if (doubles == 1) {
    if (in_cycle[partner])
      return 1;
    // Double bond into a fused neighbouring ring keeps the pi system.
    int pz = mol.atom(partner).element;
    if (in_ring[partner] && (pz == kCarbon || pz == kNitrogen))
      return 1;
    return 0;
  }

  const Element &e = element(a.element);
  int lone = e.valence_electrons - a.formal_charge - mol.bond_order_sum(i)
             - a.hydrogens;
  if (lone >= 2) {
    // Onium centres without a pi bond are pyramidal.
    if (a.formal_charge > 0)
      return -1;
    return 2;
  }
  if (lone == 0)
    return 0;
  return -1;
}

} // namespace

Molecule kekulize(const Molecule &mol) {
  Molecule out = mol;
  std::vector<bool> aromatic_atom(mol.num_atoms(), false);
  bool any = false;
  for (const Bond &b: mol.bonds()) {
    if (b.order == BondOrder::kAromatic) {
      aromatic_atom[b.a] = aromatic_atom[b.b] = true;
      any = true;
    }
  }
  for (int i = 0; i < mol.num_atoms(); ++i) {
    if (mol.atom(i).aromatic && !aromatic_atom[i])
      throw KekulizeError("aromatic atom " + std::to_string(i)
                              + " has no aromatic bond",
                          i);
  }
  if (!any) {
    for (int i = 0; i < out.num_atoms(); ++i)
      out.atom(i).aromatic = false;
    return out;
  }

  std::vector<bool> needy(mol.num_atoms(), false);
  for (int i = 0; i < mol.num_atoms(); ++i)
    needy[i] = aromatic_atom[i] && needs_double_bond(mol, i);

  // Aromatic-bond-connected systems are solved independently.
  std::vector<int> sys(mol.num_atoms(), -1);
  Matcher matcher(mol, needy);
  for (int s = 0; s < mol.num_atoms(); ++s) {
    if (!aromatic_atom[s] || sys[s] >= 0)
      continue;
    std::vector<int> members, stack { s };
    sys[s] = s;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      members.push_back(u);
      for (const Neighbor &nb: mol.neighbors(u)) {
        if (mol.bond(nb.bond).order == BondOrder::kAromatic && sys[nb.atom] < 0) {
          sys[nb.atom] = s;
          stack.push_back(nb.atom);
        }
      }
    }
    std::sort(members.begin(), members.end());
    if (!matcher.solve(members)) {
      throw KekulizeError("cannot kekulize aromatic system containing atom "
                              + std::to_string(s),
                          s);
    }
  }

  for (int bi = 0; bi < out.num_bonds(); ++bi) {
    Bond &b = out.bond(bi);
    if (b.order != BondOrder::kAromatic)
      continue;
    b.order = matcher.mate(b.a) == b.b ? BondOrder::kDouble : BondOrder::kSingle;
  }
  for (int i = 0; i < out.num_atoms(); ++i)
    out.atom(i).aromatic = false;
  return out;
}

void perceive_aromaticity(Molecule &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i)
    mol.atom(i).aromatic = false;

  auto in_ring = ring_atoms(mol);
  auto cycles = simple_cycles(mol, 6);
  std::vector<bool> in_cycle(mol.num_atoms(), false);
  std::vector<bool> aromatic_bond(mol.num_bonds(), false);
  std::vector<bool> aromatic_atom(mol.num_atoms(), false);

  for (const auto &cycle: cycles) {
    if (cycle.size() < 5)
      continue;
    for (int a: cycle)
      in_cycle[a] = true;
    int electrons = 0;
    bool ok = true;
    for (int a: cycle) {
      int e = pi_electrons(mol, a, in_cycle, in_ring);
      if (e < 0) {
        ok = false;
        break;
      }
      electrons += e;
    }
    for (int a: cycle)
      in_cycle[a] = false;
    if (!ok || electrons % 4 != 2)
      continue;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      int x = cycle[k], y = cycle[(k + 1) % cycle.size()];
      aromatic_bond[mol.bond_between(x, y)] = true;
      aromatic_atom[x] = true;
    }
  }

  for (int i = 0; i < mol.num_atoms(); ++i)
    mol.atom(i).aromatic = aromatic_atom[i];
  for (int bi = 0; bi < mol.num_bonds(); ++bi) {
    if (aromatic_bond[bi])
      mol.bond(bi).order = BondOrder::kAromatic;
  }
}

Molecule normalize_aromaticity(const Molecule &mol) {
  Molecule out = kekulize(mol);
  perceive_aromaticity(out);
  return out;
}

} // namespace pagforge::chem
