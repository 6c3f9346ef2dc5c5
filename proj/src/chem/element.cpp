//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/element.h"

#include <algorithm>
#include <array>
#include <string>

#include "pagforge/util/error.h"

namespace pagforge::chem {
namespace {

constexpr std::array kTable {
  Element { 1, "H", 1.008, 1, 1, false },
  Element { 3, "Li", 6.94, 1, 2, true },
  Element { 5, "B", 10.81, 3, 2, false },
  Element { 6, "C", 12.011, 4, 2, false },
  Element { 7, "N", 14.007, 5, 2, false },
  Element { 8, "O", 15.999, 6, 2, false },
  Element { 9, "F", 18.998, 7, 2, false },
  Element { 11, "Na", 22.990, 1, 3, true },
  Element { 12, "Mg", 24.305, 2, 3, true },
  Element { 14, "Si", 28.085, 4, 3, false },
  Element { 15, "P", 30.974, 5, 3, false },
  Element { 16, "S", 32.06, 6, 3, false },
  Element { 17, "Cl", 35.45, 7, 3, false },
  Element { 19, "K", 39.098, 1, 4, true },
  Element { 20, "Ca", 40.078, 2, 4, true },
  Element { 30, "Zn", 65.38, 2, 4, true },
  Element { 33, "As", 74.922, 5, 4, false },
  Element { 34, "Se", 78.971, 6, 4, false },
  Element { 35, "Br", 79.904, 7, 4, false },
  Element { 50, "Sn", 118.71, 4, 5, false },
  Element { 53, "I", 126.90, 7, 5, false },
};

} // namespace

std::span<const Element> periodic_table() {
  return kTable;
}

const Element *find_element(std::string_view symbol) {
  auto it = std::find_if(kTable.begin(), kTable.end(),
                         [&](const Element &e) { return e.symbol == symbol; });
  return it == kTable.end() ? nullptr : &*it;
}

const Element &element(int z) {
  auto it = std::find_if(kTable.begin(), kTable.end(),
                         [&](const Element &e) { return e.z == z; });
  if (it == kTable.end())
    throw InvalidArgument("unsupported atomic number " + std::to_string(z));
  return *it;
}

std::vector<int> allowed_valences(int z, int formal_charge) {
  const Element &e = element(z);
  if (e.z == kHydrogen)
    return { formal_charge == 0 ? 1 : 0 };

  if (e.metal) {
    int v = e.valence_electrons - formal_charge;
    return { std::max(v, 0) };
  }

  int v = e.valence_electrons - formal_charge;
  switch (v) {
  case 1:
    return { 1 };
  case 2:
    return { 2 };
  case 3:
    return { 3 };
  case 4:
    return { 4 };
  case 5:
    // Hypervalent nitrogen (nitro written as N(=O)=O) is legal SMILES.
    if (e.period == 2 && !(e.z == kNitrogen && formal_charge == 0))
      return { 3 };
    return { 3, 5 };
  case 6:
    if (e.period == 2)
      return { 2 };
    return { 2, 4, 6 };
  case 7:
    if (e.period == 2)
      return { 1 };
    return { 1, 3, 5, 7 };
  default:
    return { 0 };
  }
}

} // namespace pagforge::chem
