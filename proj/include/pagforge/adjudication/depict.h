//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_ADJUDICATION_DEPICT_H_
#define PAGFORGE_ADJUDICATION_DEPICT_H_

#include <string>
#include <vector>

#include "pagforge/chem/molecule.h"

namespace pagforge::adj {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Deterministic 2-D coordinates with unit bond length: rings as regular
/// polygons (fused rings share an edge), 120 degree zig-zag chains, then a
/// few rounds of pushing apart non-bonded chain atoms that collide.
/// Disconnected components are laid out left to right.
std::vector<Point> layout_2d(const chem::Molecule &mol);

// Standalone SVG document. Heteroatoms and charged atoms carry labels with
// their hydrogens and an explicit charge sign.
std::string depict_svg(const chem::Molecule &mol, const std::string &title = "");

} // namespace pagforge::adj

#endif // PAGFORGE_ADJUDICATION_DEPICT_H_
