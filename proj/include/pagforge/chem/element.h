//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_CHEM_ELEMENT_H_
#define PAGFORGE_CHEM_ELEMENT_H_

#include <span>
#include <string_view>
#include <vector>

namespace pagforge::chem {

struct Element {
  int z;
  std::string_view symbol;
  double weight;          // IUPAC conventional standard atomic weight
  int valence_electrons;  // main-group count; s-block metals use group number
  int period;
  bool metal;
};

// Supported periodic table subset, ordered by atomic number.
std::span<const Element> periodic_table();

// nullptr for symbols outside the supported table.
const Element *find_element(std::string_view symbol);

// Throws InvalidArgument for unsupported atomic numbers.
const Element &element(int z);

// Allowed total valences (bond orders + hydrogens) for an element carrying
// a formal charge, ascending. Charged main-group atoms take the valences of
// the isoelectronic neutral atom.
std::vector<int> allowed_valences(int z, int formal_charge);

inline constexpr int kHydrogen = 1;
inline constexpr int kBoron = 5;
inline constexpr int kCarbon = 6;
inline constexpr int kNitrogen = 7;
inline constexpr int kOxygen = 8;
inline constexpr int kFluorine = 9;
inline constexpr int kSilicon = 14;
inline constexpr int kPhosphorus = 15;
inline constexpr int kSulfur = 16;
inline constexpr int kChlorine = 17;
inline constexpr int kBromine = 35;
inline constexpr int kIodine = 53;

} // namespace pagforge::chem

#endif // PAGFORGE_CHEM_ELEMENT_H_
