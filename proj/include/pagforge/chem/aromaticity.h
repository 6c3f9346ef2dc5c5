//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_AROMATICITY_H_
#define PAGFORGE_CHEM_AROMATICITY_H_

#include "pagforge/chem/molecule.h"
#include "pagforge/util/error.h"

namespace pagforge::chem {

class KekulizeError: public Error {
public:
  KekulizeError(const std::string &what, int atom): Error(what), atom_(atom) { }
  int atom() const noexcept { return atom_; }

private:
  int atom_;
};

/// Replaces every aromatic bond with an explicit single/double assignment
/// so that each aromatic atom that lacks a pi bond receives exactly one
/// double bond. Aromatic flags are cleared. Throws KekulizeError when no
/// such assignment exists.
Molecule kekulize(const Molecule &mol);

/// Hückel-style perception over all 5- and 6-membered simple cycles of a
/// Kekulé structure. A cycle is aromatic when every member is sp2-capable
/// and the cycle holds 4n+2 pi electrons. Bonds of aromatic cycles become
/// BondOrder::kAromatic; other bonds keep their Kekulé order.
void perceive_aromaticity(Molecule &mol);

// kekulize followed by perceive_aromaticity.
Molecule normalize_aromaticity(const Molecule &mol);

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_AROMATICITY_H_
