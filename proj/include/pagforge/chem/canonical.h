//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_CANONICAL_H_
#define PAGFORGE_CHEM_CANONICAL_H_

#include <string>
#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::chem {

/// Distinct canonical ranks 0..n-1 from iterative invariant refinement
/// (element, degree, hydrogen count, charge, aromaticity, ring membership,
/// then neighbour ranks and bond orders). Remaining ties are broken by
/// promoting one member of the lowest tied class and refining again.
std::vector<int> canonical_ranks(const Molecule &mol);

// Deterministic string independent of input atom order. Components are
// emitted in lexicographic order of their own strings.
std::string canonical_smiles(const Molecule &mol);

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_CANONICAL_H_
