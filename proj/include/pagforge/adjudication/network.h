//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_ADJUDICATION_NETWORK_H_
#define PAGFORGE_ADJUDICATION_NETWORK_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/adjudication/store.h"
#include "pagforge/descriptors/fingerprint.h"

namespace pagforge::adj {

inline constexpr double kDefaultLinkThreshold = 0.65;

struct SimilarityEdge {
  int a = 0;  // a < b
  int b = 0;
  double distance = 0.0;
};

// Pairs with dice_distance strictly below threshold, ordered by (a, b).
std::vector<SimilarityEdge> similarity_edges(const std::vector<desc::Fingerprint> &fps,
                                             double threshold = kDefaultLinkThreshold);

struct NetworkGraph {
  double threshold = kDefaultLinkThreshold;
  std::vector<std::string> scaffold_nodes;
  std::vector<std::string> molecule_nodes;
  std::vector<std::pair<std::string, std::string>> scaffold_edges;  // scaffold, scaffold
  std::vector<double> scaffold_edge_distances;
  std::vector<std::pair<std::string, std::string>> derivation_edges;  // molecule, scaffold
};

NetworkGraph build_network(const CandidateStore &store,
                           double threshold = kDefaultLinkThreshold);

} // namespace pagforge::adj

#endif // PAGFORGE_ADJUDICATION_NETWORK_H_
