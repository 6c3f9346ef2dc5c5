//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/descriptors/properties.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"
#include "pagforge/descriptors/fingerprint.h"
#include "pagforge/util/embedded_data.h"
#include "pagforge/util/error.h"

namespace pagforge::desc {
namespace {

using chem::BondOrder;
using chem::Molecule;

struct BondProfile {
  int doubles = 0;
  int triples = 0;
  int hetero = 0;  // neighbours other than C and H
  int heavy = 0;
  int aromatic_neighbors = 0;
};

BondProfile profile(const Molecule &mol, int i) {
  BondProfile p;
  for (const auto &nb: mol.neighbors(i)) {
    const chem::Atom &other = mol.atom(nb.atom);
    BondOrder order = mol.bond(nb.bond).order;
    p.doubles += order == BondOrder::kDouble;
    p.triples += order == BondOrder::kTriple;
    if (other.element != chem::kHydrogen)
      ++p.heavy;
    if (other.element != chem::kCarbon && other.element != chem::kHydrogen)
      ++p.hetero;
    if (order == BondOrder::kAromatic)
      ++p.aromatic_neighbors;
  }
  return p;
}

std::string carbon_class(const chem::Atom &a, const BondProfile &p) {
  if (a.formal_charge != 0)
    return "C_charged";
  if (a.aromatic) {
    if (p.hetero > 0)
      return "C_ar_X";
    return p.aromatic_neighbors >= 3 ? "C_ar_fused" : "C_ar";
  }
  if (p.triples > 0 || p.doubles > 1)
    return "C_sp";
  if (p.doubles == 1)
    return p.hetero > 0 ? "C_sp2_X" : "C_sp2_C";
  if (p.hetero > 0)
    return "C_sp3_X";
  return p.heavy <= 2 ? "C_sp3_CC" : "C_sp3_Cbranch";
}

std::string nitrogen_class(const chem::Atom &a, const BondProfile &p) {
  if (a.formal_charge > 0)
    return "N_plus";
  if (a.formal_charge < 0)
    return "N_minus";
  if (a.aromatic)
    return "N_ar";
  if (p.triples > 0)
    return "N_sp";
  if (p.doubles > 0)
    return "N_sp2";
  if (a.hydrogens >= 2)
    return "N_amine_H2";
  return a.hydrogens == 1 ? "N_amine_H1" : "N_amine_H0";
}

std::string oxygen_class(const chem::Atom &a, const BondProfile &p) {
  if (a.formal_charge < 0)
    return "O_minus";
  if (a.formal_charge > 0)
    return "O_plus";
  if (a.aromatic)
    return "O_ar";
  if (p.doubles > 0)
    return "O_carbonyl";
  return a.hydrogens > 0 ? "O_hydroxyl" : "O_ether";
}

std::string sulfur_class(const chem::Atom &a, const BondProfile &p) {
  if (a.formal_charge > 0)
    return "S_plus";
  if (a.formal_charge < 0)
    return "S_minus";
  if (a.aromatic)
    return "S_ar";
  return p.doubles > 0 ? "S_oxidized" : "S_thioether";
}

std::vector<std::set<int>> ring_sets(const Molecule &mol) {
  std::vector<std::set<int>> out;
  for (const auto &ring: chem::ring_stats(mol).rings)
    out.emplace_back(ring.begin(), ring.end());
  return out;
}

} // namespace

double molecular_weight(const Molecule &mol) {
  const double h = chem::element(chem::kHydrogen).weight;
  double total = 0.0;
  for (const auto &a: mol.atoms())
    total += chem::element(a.element).weight + a.hydrogens * h;
  return total;
}

double fluorine_fraction(const Molecule &mol) {
  int heavy = 0;
  int fluorine = 0;
  for (const auto &a: mol.atoms()) {
    if (a.element == chem::kHydrogen)
      continue;
    ++heavy;
    fluorine += a.element == chem::kFluorine;
  }
  return heavy == 0 ? 0.0 : static_cast<double>(fluorine) / heavy;
}

CrippenTable CrippenTable::parse(std::string_view text) {
  CrippenTable table;
  std::istringstream in { std::string(text) };
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string key;
    double value = 0.0;
    if (!(fields >> key))
      continue;
    if (!(fields >> value))
      throw InvalidArgument("crippen table line " + std::to_string(lineno)
                            + ": missing value for '" + key + "'");
    if (key == "version")
      table.version_ = static_cast<int>(value);
    else
      table.values_[key] = value;
  }
  if (!table.contains("wildcard"))
    throw InvalidArgument("crippen table lacks a wildcard class");
  return table;
}

const CrippenTable &CrippenTable::bundled() {
  static const CrippenTable table = parse(embedded::crippen_table());
  return table;
}

double CrippenTable::value(const std::string &cls) const {
  auto it = values_.find(cls);
  return it != values_.end() ? it->second : values_.at("wildcard");
}

std::string crippen_atom_class(const Molecule &mol, int i) {
  const chem::Atom &a = mol.atom(i);
  BondProfile p = profile(mol, i);
  switch (a.element) {
  case chem::kCarbon:
    return carbon_class(a, p);
  case chem::kNitrogen:
    return nitrogen_class(a, p);
  case chem::kOxygen:
    return oxygen_class(a, p);
  case chem::kSulfur:
    return sulfur_class(a, p);
  default:
    return std::string(chem::element(a.element).symbol);
  }
}

std::string crippen_hydrogen_class(const Molecule &mol, int i) {
  switch (mol.atom(i).element) {
  case chem::kCarbon:
    return "H_C";
  case chem::kNitrogen:
    return "H_N";
  case chem::kOxygen:
    return "H_O";
  case chem::kSulfur:
    return "H_S";
  default:
    return "H_other";
  }
}

double crippen_logp(const Molecule &mol, const CrippenTable &table) {
  // Summing per class in key order keeps the result independent of atom
  // numbering down to the last bit.
  std::map<std::string, int> counts;
  for (int i = 0; i < mol.num_atoms(); ++i) {
    ++counts[crippen_atom_class(mol, i)];
    if (int h = mol.atom(i).hydrogens; h > 0)
      counts[crippen_hydrogen_class(mol, i)] += h;
  }
  double total = 0.0;
  for (const auto &[cls, n]: counts)
    total += n * table.value(cls);
  return total;
}

SaFragmentTable SaFragmentTable::parse(std::string_view text) {
  SaFragmentTable table;
  std::istringstream in { std::string(text) };
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#')
      continue;
    std::istringstream fields(line);
    std::uint64_t id = 0;
    double score = 0.0;
    if (fields >> id >> score)
      table.scores_[id] = score;
  }
  return table;
}

const SaFragmentTable &SaFragmentTable::bundled() {
  static const SaFragmentTable table = parse(embedded::sa_fragment_table());
  return table;
}

double SaFragmentTable::contribution(std::uint64_t id) const {
  auto it = scores_.find(id);
  return it == scores_.end() ? kUnknown : it->second;
}

int spiro_atom_count(const Molecule &mol) {
  auto rings = ring_sets(mol);
  std::set<int> spiro;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    for (std::size_t s = r + 1; s < rings.size(); ++s) {
      std::vector<int> shared;
      std::set_intersection(rings[r].begin(), rings[r].end(),
                            rings[s].begin(), rings[s].end(),
                            std::back_inserter(shared));
      if (shared.size() == 1)
        spiro.insert(shared[0]);
    }
  }
  return static_cast<int>(spiro.size());
}

int bridgehead_atom_count(const Molecule &mol) {
  auto rings = ring_sets(mol);
  std::set<int> heads;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    for (std::size_t s = r + 1; s < rings.size(); ++s) {
      std::vector<int> shared;
      std::set_intersection(rings[r].begin(), rings[r].end(),
                            rings[s].begin(), rings[s].end(),
                            std::back_inserter(shared));
      if (shared.size() < 3)
        continue;
      std::set<int> in_shared(shared.begin(), shared.end());
      for (int atom: shared) {
        int inner = 0;
        for (const auto &nb: mol.neighbors(atom))
          inner += in_shared.count(nb.atom) > 0;
        if (inner < 2)
          heads.insert(atom);
      }
    }
  }
  return static_cast<int>(heads.size());
}

double sa_score(const Molecule &mol, const SaFragmentTable &table) {
  int n_atoms = mol.heavy_atom_count();
  if (n_atoms == 0)
    return 10.0;

  auto envs = morgan_environments(mol, 2);
  double fragment = 0.0;
  for (auto id: envs)
    fragment += table.contribution(id);
  fragment /= static_cast<double>(envs.size());
  std::unordered_set<std::uint64_t> distinct(envs.begin(), envs.end());

  auto info = chem::ring_stats(mol);
  double size_penalty = std::pow(n_atoms, 1.005) - n_atoms;
  double spiro_penalty = std::log10(spiro_atom_count(mol) + 1.0);
  double bridge_penalty = std::log10(bridgehead_atom_count(mol) + 1.0);
  double macro_penalty = info.max_ring_size > 8 ? std::log10(2.0) : 0.0;
  double complexity = -size_penalty - spiro_penalty - bridge_penalty
                      - macro_penalty;

  double symmetry = 0.0;
  if (static_cast<std::size_t>(n_atoms) > distinct.size())
    symmetry = std::log(static_cast<double>(n_atoms) / distinct.size()) * 0.5;

  constexpr double kMin = -4.0;
  constexpr double kMax = 2.5;
  double raw = fragment + complexity + symmetry;
  double score = 11.0 - (raw - kMin + 1.0) / (kMax - kMin) * 9.0;
  if (score > 8.0)
    score = 8.0 + std::log(score + 1.0 - 9.0);
  return std::clamp(score, 1.0, 10.0);
}

std::array<double, DescriptorVector::kSize> DescriptorVector::as_array() const {
  return { mw, logp, sa, static_cast<double>(num_atoms),
           static_cast<double>(ring_count), static_cast<double>(max_ring_size),
           fluorine_fraction };
}

DescriptorVector compute_descriptors(const Molecule &mol) {
  DescriptorVector d;
  auto info = chem::ring_stats(mol);
  d.mw = molecular_weight(mol);
  d.logp = crippen_logp(mol);
  d.sa = sa_score(mol);
  d.num_atoms = mol.heavy_atom_count();
  d.ring_count = info.ring_count;
  d.max_ring_size = info.max_ring_size;
  d.fluorine_fraction = fluorine_fraction(mol);
  return d;
}

} // namespace pagforge::desc
