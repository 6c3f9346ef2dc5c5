//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/adjudication/network.h"

namespace pagforge::adj {

std::vector<SimilarityEdge> similarity_edges(const std::vector<desc::Fingerprint> &fps,
                                             double threshold) {
  std::vector<SimilarityEdge> edges;
  const int n = static_cast<int>(fps.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double d = desc::dice_distance(fps[i], fps[j]);
      if (d < threshold)
        edges.push_back({ i, j, d });
    }
  }
  return edges;
}

NetworkGraph build_network(const CandidateStore &store, double threshold) {
  NetworkGraph g;
  g.threshold = threshold;
  std::vector<desc::Fingerprint> fps;
  for (const auto &s: store.scaffolds()) {
    g.scaffold_nodes.push_back(s.id);
    fps.push_back(s.fp);
  }
  for (const auto &e: similarity_edges(fps, threshold)) {
    g.scaffold_edges.emplace_back(g.scaffold_nodes[e.a], g.scaffold_nodes[e.b]);
    g.scaffold_edge_distances.push_back(e.distance);
  }
  for (const auto &c: store.candidates()) {
    g.molecule_nodes.push_back(c.id);
    for (const auto &sid: c.scaffold_ids)
      g.derivation_edges.emplace_back(c.id, sid);
  }
  return g;
}

} // namespace pagforge::adj
