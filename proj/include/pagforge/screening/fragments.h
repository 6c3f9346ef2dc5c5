//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SCREENING_FRAGMENTS_H_
#define PAGFORGE_SCREENING_FRAGMENTS_H_

#include <string>
#include <utility>
#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::screen {

/// BRICS environment labels matched by atom i ("1", "3", ..., "7a", "16").
/// Labels follow the sixteen published environments; each bond rule also
/// requires the bond itself to be acyclic.
std::vector<std::string> brics_labels(const chem::Molecule &mol, int i);

// Bonds cleaved by the BRICS rule table, ascending.
std::vector<int> brics_bonds(const chem::Molecule &mol);

/// Cleaves every BRICS bond at once, caps each broken valence with
/// hydrogen and returns the distinct fragments ordered by canonical SMILES.
/// A molecule without cleavable bonds is returned unchanged.
std::vector<chem::Molecule> brics_fragments(const chem::Molecule &mol);
std::vector<std::string> brics_fragment_smiles(const chem::Molecule &mol);

/// Bemis-Murcko framework: ring systems plus the linker atoms between them.
/// Terminal acyclic atoms are removed repeatedly and their bond valence is
/// returned to the neighbour as hydrogen. Acyclic input gives an empty
/// molecule.
chem::Molecule murcko_scaffold(const chem::Molecule &mol);

// Removes the listed bonds, adding hydrogens for the lost valence, and
// re-perceives aromaticity on the Kekulé form.
chem::Molecule cut_bonds(const chem::Molecule &mol, const std::vector<int> &bonds);

} // namespace pagforge::screen

#endif // PAGFORGE_SCREENING_FRAGMENTS_H_
