//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_DATASET_WINDOW_H_
#define PAGFORGE_DATASET_WINDOW_H_

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/dataset/records.h"
#include "pagforge/descriptors/properties.h"

namespace pagforge::data {

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool contains(double v) const { return v >= min && v <= max; }
};

/// Inclusive per-property bounds plus the allowed heavy-element set.
/// Hydrogen is always allowed.
struct PropertyWindow {
  Range num_atoms;
  Range logp;
  Range sa;
  Range mw;
  Range ring_count;
  Range max_ring_size;
  std::set<std::string> elements;

  // Throws InvalidArgument when any min > max or a field is missing.
  static PropertyWindow from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

// Bounds observed over the reference PAG cations (heavy-atom counts).
PropertyWindow table1_window();

// Rule names, in report order.
inline const std::vector<std::string> &window_rules() {
  static const std::vector<std::string> kRules {
    "num_atoms", "logp", "sa", "mw", "ring_count", "max_ring_size", "elements",
  };
  return kRules;
}

// Names of the rules a molecule violates; empty when it is inside.
std::vector<std::string> window_violations(const chem::Molecule &mol,
                                           const desc::DescriptorVector &d,
                                           const PropertyWindow &window);

struct WindowResult {
  std::vector<Record> kept;
  std::vector<desc::DescriptorVector> kept_descriptors;
  // Molecules violating several rules count once under each.
  std::map<std::string, int> drops_per_rule;
  int dropped = 0;

  nlohmann::json report() const;
};

/// Keeps records inside every bound. Descriptors are computed in parallel;
/// the output preserves input order.
WindowResult filter_window(const std::vector<Record> &records,
                           const PropertyWindow &window,
                           int threads = 0);  // 0: hardware concurrency

} // namespace pagforge::data

#endif // PAGFORGE_DATASET_WINDOW_H_
