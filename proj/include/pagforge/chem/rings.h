//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_RINGS_H_
#define PAGFORGE_CHEM_RINGS_H_

#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::chem {

struct RingInfo {
  // Smallest set of smallest rings; each ring lists atoms in cycle order.
  std::vector<std::vector<int>> rings;
  int ring_count = 0;
  int max_ring_size = 0;
};

/// Minimum cycle basis (SSSR) built from Horton candidate cycles, selected
/// shortest-first by Gaussian elimination over GF(2) on bond incidence.
/// Candidates of equal length are ordered by their sorted atom indices.
RingInfo ring_stats(const Molecule &mol);

// Per-bond flag: true when the bond lies on at least one cycle.
std::vector<bool> ring_bonds(const Molecule &mol);

// Per-atom flag: true when the atom has a ring bond.
std::vector<bool> ring_atoms(const Molecule &mol);

// All simple cycles with at most max_size atoms, each in cycle order
// starting at its smallest atom index. Independent of any basis choice.
std::vector<std::vector<int>> simple_cycles(const Molecule &mol, int max_size);

// Groups SSSR rings that share at least one atom. Each system is the sorted
// list of indices into RingInfo::rings.
std::vector<std::vector<int>> ring_systems(const RingInfo &info);

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_RINGS_H_
