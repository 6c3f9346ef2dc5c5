//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_MOLECULE_H_
#define PAGFORGE_CHEM_MOLECULE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pagforge::chem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

// Valence contribution of a bond, counting aromatic bonds as 1 (the pi
// electron is accounted separately).
inline int valence_contribution(BondOrder order) {
  return order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
}

struct Atom {
  int element = 6;
  int formal_charge = 0;
  bool aromatic = false;
  int hydrogens = 0;  // attached hydrogen count (all H are stored as counts)
  int index = 0;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  int bond;
};

/// Attributed molecular graph. Atoms and bonds are addressed by their
/// position in the respective vectors; Atom::index mirrors the position.
class Molecule {
public:
  Molecule() = default;

  int add_atom(Atom atom);

  // Throws InvalidArgument on self-loops, unknown atoms or duplicate bonds.
  int add_bond(int a, int b, BondOrder order);

  int num_atoms() const { return static_cast<int>(atoms_.size()); }
  int num_bonds() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const Atom &atom(int i) const { return atoms_[i]; }
  Atom &atom(int i) { return atoms_[i]; }
  const Bond &bond(int i) const { return bonds_[i]; }
  Bond &bond(int i) { return bonds_[i]; }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const std::vector<Neighbor> &neighbors(int i) const { return adj_[i]; }

  int degree(int i) const { return static_cast<int>(adj_[i].size()); }

  // -1 if not bonded.
  int bond_between(int a, int b) const;

  // Sum of valence contributions of all bonds at atom i.
  int bond_order_sum(int i) const;

  const std::optional<std::string> &id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  // Connected components as sorted atom index lists, ordered by smallest
  // member.
  std::vector<std::vector<int>> components() const;

  // New molecule containing only the listed atoms (in the given order) and
  // the bonds among them. Hydrogen counts are copied unchanged.
  Molecule subgraph(const std::vector<int> &atoms) const;

  // Molecule with atoms renumbered so that new index i holds old atom
  // order[i]. order must be a permutation.
  Molecule permuted(const std::vector<int> &order) const;

  int heavy_atom_count() const;

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adj_;
  std::optional<std::string> id_;
};

int net_charge(const Molecule &mol);

// Net charge per connected component, in components() order.
std::vector<int> component_charges(const Molecule &mol);

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_MOLECULE_H_
