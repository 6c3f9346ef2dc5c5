//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_SMILES_H_
#define PAGFORGE_CHEM_SMILES_H_

#include <string>
#include <string_view>
#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::chem {

/// Parses the OpenSMILES subset used throughout the project: organic-subset
/// and bracket atoms (hydrogen count and charge), ring closures including
/// %nn, branches, explicit bond orders, dot-disconnected components and
/// lowercase aromatic atoms. Stereo markers (@, /, \) and isotopes are read
/// and discarded. Explicit [H] atoms bonded to a heavy atom are folded into
/// that atom's hydrogen count.
///
/// The result is kekulized and then re-perceived, so aromatic flags reflect
/// perception rather than the input spelling. Throws SmilesError.
Molecule parse_smiles(std::string_view text);

// Hydrogen count the parser assigns to an unbracketed atom with the given
// bond-valence sum (aromatic bonds counted as 1). -1 on valence violation.
int default_hydrogens(int element, bool aromatic, int bond_sum);

// True when the element can be written without brackets.
bool in_organic_subset(int element, bool aromatic);

/// Writes SMILES visiting atoms in rank order (lowest first): each
/// component starts at its lowest-ranked atom and branches are taken in
/// ascending rank. ranks must hold distinct values.
std::string write_smiles(const Molecule &mol, const std::vector<int> &ranks);

// write_smiles with ranks equal to atom indices.
std::string write_smiles(const Molecule &mol);

// Kekulé SMILES: the kekulized molecule written with explicit bond orders
// and uppercase atoms.
std::string write_kekule_smiles(const Molecule &mol);

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_SMILES_H_
