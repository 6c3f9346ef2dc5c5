//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SCREENING_FILTERS_H_
#define PAGFORGE_SCREENING_FILTERS_H_

#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "pagforge/chem/molecule.h"

namespace pagforge::screen {

// S with charge +1, three heavy neighbours and only single bonds.
bool has_sulfonium(const chem::Molecule &mol);
// Any S with charge +1 and only single bonds (hydrogens allowed), as left
// behind when side chains are stripped from a sulfonium.
bool has_sulfonium_center(const chem::Molecule &mol);
/// Neutral non-aromatic N with three single-bonded substituents (hydrogens
/// included) and no neighbouring carbon that carries a C=O.
bool has_amine(const chem::Molecule &mol);

struct FilterConfig {
  double fluorine_threshold = 0.2;
};

struct Candidate {
  std::string id;
  std::string smiles;
};

struct FilterVerdict {
  std::string id;
  std::string smiles;
  std::string canonical;  // empty when the SMILES is invalid
  bool passed = false;
  // Subset of invalid_smiles, not_sulfonium, contains_amine, fluorine_rich,
  // exact_match_training, in that order.
  std::vector<std::string> failed_rules;

  nlohmann::json to_json() const;
};

/// Applies every rule to each candidate independently. training holds
/// canonical SMILES.
std::vector<FilterVerdict> chem_filters(
    const std::vector<Candidate> &candidates,
    const std::unordered_set<std::string> &training,
    const FilterConfig &config = {});

} // namespace pagforge::screen

#endif // PAGFORGE_SCREENING_FILTERS_H_
