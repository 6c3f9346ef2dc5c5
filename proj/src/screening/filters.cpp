//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/screening/filters.h"

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/element.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/descriptors/properties.h"
#include "pagforge/util/error.h"

namespace pagforge::screen {
namespace {

bool all_single(const chem::Molecule &mol, int i) {
  for (const auto &nb: mol.neighbors(i)) {
    if (mol.bond(nb.bond).order != chem::BondOrder::kSingle)
      return false;
  }
  return true;
}

bool is_carbonyl_carbon(const chem::Molecule &mol, int i) {
  if (mol.atom(i).element != chem::kCarbon)
    return false;
  for (const auto &nb: mol.neighbors(i)) {
    if (mol.bond(nb.bond).order == chem::BondOrder::kDouble
        && mol.atom(nb.atom).element == chem::kOxygen)
      return true;
  }
  return false;
}

} // namespace

bool has_sulfonium(const chem::Molecule &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const chem::Atom &a = mol.atom(i);
    if (a.element == chem::kSulfur && a.formal_charge == 1
        && mol.degree(i) == 3 && all_single(mol, i))
      return true;
  }
  return false;
}

bool has_sulfonium_center(const chem::Molecule &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const chem::Atom &a = mol.atom(i);
    if (a.element == chem::kSulfur && a.formal_charge == 1 && !a.aromatic
        && all_single(mol, i))
      return true;
  }
  return false;
}

bool has_amine(const chem::Molecule &mol) {
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const chem::Atom &a = mol.atom(i);
    if (a.element != chem::kNitrogen || a.formal_charge != 0 || a.aromatic
        || !all_single(mol, i) || mol.degree(i) + a.hydrogens != 3)
      continue;
    bool amide = false;
    for (const auto &nb: mol.neighbors(i))
      amide = amide || is_carbonyl_carbon(mol, nb.atom);
    if (!amide)
      return true;
  }
  return false;
}

nlohmann::json FilterVerdict::to_json() const {
  return { { "id", id }, { "smiles", smiles }, { "canonical", canonical },
           { "passed", passed }, { "failed_rules", failed_rules } };
}

std::vector<FilterVerdict> chem_filters(
    const std::vector<Candidate> &candidates,
    const std::unordered_set<std::string> &training,
    const FilterConfig &config) {
  std::vector<FilterVerdict> out;
  out.reserve(candidates.size());
  for (const auto &c: candidates) {
    FilterVerdict v;
    v.id = c.id;
    v.smiles = c.smiles;
    chem::Molecule mol;
    try {
      if (c.smiles.empty())
        throw SmilesError(SmilesError::Kind::kSyntax, 0, "empty SMILES");
      mol = chem::parse_smiles(c.smiles);
    } catch (const SmilesError &) {
      v.failed_rules.emplace_back("invalid_smiles");
      out.push_back(std::move(v));
      continue;
    }
    v.canonical = chem::canonical_smiles(mol);
    if (!has_sulfonium(mol))
      v.failed_rules.emplace_back("not_sulfonium");
    if (has_amine(mol))
      v.failed_rules.emplace_back("contains_amine");
    if (desc::fluorine_fraction(mol) >= config.fluorine_threshold)
      v.failed_rules.emplace_back("fluorine_rich");
    if (training.count(v.canonical))
      v.failed_rules.emplace_back("exact_match_training");
    v.passed = v.failed_rules.empty();
    out.push_back(std::move(v));
  }
  return out;
}

} // namespace pagforge::screen
