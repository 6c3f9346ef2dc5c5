//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_DESCRIPTORS_PROPERTIES_H_
#define PAGFORGE_DESCRIPTORS_PROPERTIES_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>

#include "pagforge/chem/molecule.h"

namespace pagforge::desc {

// Sum of standard atomic weights including attached hydrogens, in g/mol.
double molecular_weight(const chem::Molecule &mol);

// F count over heavy-atom count; 0 for an empty molecule.
double fluorine_fraction(const chem::Molecule &mol);

/// Per-class logP contributions parsed from "<class> <value>" lines.
/// Blank lines and '#' comments are ignored.
class CrippenTable {
public:
  static CrippenTable parse(std::string_view text);
  // Table compiled into the library.
  static const CrippenTable &bundled();

  // Contribution of a class, falling back to "wildcard".
  double value(const std::string &cls) const;
  bool contains(const std::string &cls) const { return values_.count(cls) > 0; }
  int version() const { return version_; }

private:
  std::unordered_map<std::string, double> values_;
  int version_ = 0;
};

// Heavy-atom class of atom i and the class applied to each of its hydrogens.
std::string crippen_atom_class(const chem::Molecule &mol, int i);
std::string crippen_hydrogen_class(const chem::Molecule &mol, int i);

double crippen_logp(const chem::Molecule &mol,
                    const CrippenTable &table = CrippenTable::bundled());

/// Fragment-contribution table for the synthetic accessibility score,
/// keyed by unfolded radius-2 environment identifier.
class SaFragmentTable {
public:
  static SaFragmentTable parse(std::string_view text);
  static const SaFragmentTable &bundled();

  // Contribution for a known fragment, or kUnknown.
  double contribution(std::uint64_t id) const;
  std::size_t size() const { return scores_.size(); }

  static constexpr double kUnknown = -4.0;

private:
  std::unordered_map<std::uint64_t, double> scores_;
};

/// Synthetic accessibility in [1, 10] (1 = easy): the mean fragment
/// contribution minus size, ring-complexity and macrocycle penalties,
/// plus a symmetry correction, rescaled onto [1, 10].
double sa_score(const chem::Molecule &mol,
                const SaFragmentTable &table = SaFragmentTable::bundled());

// Atoms shared by two rings that meet at exactly one atom, and atoms that
// terminate a multi-bond fusion path between two rings.
int spiro_atom_count(const chem::Molecule &mol);
int bridgehead_atom_count(const chem::Molecule &mol);

struct DescriptorVector {
  double mw = 0.0;
  double logp = 0.0;
  double sa = 0.0;
  int num_atoms = 0;  // heavy atoms
  int ring_count = 0;
  int max_ring_size = 0;
  double fluorine_fraction = 0.0;

  static constexpr int kSize = 7;
  std::array<double, kSize> as_array() const;
};

DescriptorVector compute_descriptors(const chem::Molecule &mol);

} // namespace pagforge::desc

#endif // PAGFORGE_DESCRIPTORS_PROPERTIES_H_
