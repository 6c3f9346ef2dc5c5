//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/adjudication/store.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/screening/analysis.h"
#include "pagforge/util/error.h"

namespace pagforge::adj {

nlohmann::json descriptors_json(const desc::DescriptorVector &d) {
  return {
    { "mw", d.mw },
    { "logp", d.logp },
    { "sa", d.sa },
    { "num_atoms", d.num_atoms },
    { "ring_count", d.ring_count },
    { "max_ring_size", d.max_ring_size },
    { "fluorine_fraction", d.fluorine_fraction },
  };
}

CandidateStore CandidateStore::from_json(const nlohmann::json &j) {
  const nlohmann::json &list = j.is_object() && j.contains("candidates") ? j.at("candidates") : j;
  if (!list.is_array())
    throw InvalidArgument("candidate file must hold an array of candidates");

  CandidateStore store;
  std::map<std::string, std::vector<std::string>> parents_of;
  for (std::size_t k = 0; k < list.size(); ++k) {
    const auto &e = list[k];
    std::string where = "candidate #" + std::to_string(k);
    if (!e.is_object() || !e.contains("id") || !e.contains("smiles") ||
        !e.contains("classifier_score"))
      throw InvalidArgument(where + ": id, smiles and classifier_score are required");
    Candidate c;
    try {
      c.id = e.at("id").get<std::string>();
      c.classifier_score = e.at("classifier_score").get<double>();
      c.max_ref_similarity = e.value("max_ref_similarity", 0.0);
      c.mol = chem::parse_smiles(e.at("smiles").get<std::string>());
    } catch (const nlohmann::json::exception &ex) {
      throw InvalidArgument(where + ": " + ex.what());
    } catch (const SmilesError &ex) {
      throw InvalidArgument(where + ": " + ex.what());
    }
    if (!(c.classifier_score > 0.0 && c.classifier_score < 1.0))
      throw InvalidArgument(c.id + ": classifier_score must lie in (0,1)");
    if (!(c.max_ref_similarity >= 0.0 && c.max_ref_similarity <= 1.0))
      throw InvalidArgument(c.id + ": max_ref_similarity must lie in [0,1]");
    if (store.candidate_index_.count(c.id))
      throw InvalidArgument("duplicate candidate id " + c.id);
    c.mol.set_id(c.id);
    c.smiles = chem::canonical_smiles(c.mol);
    c.descriptors = desc::compute_descriptors(c.mol);
    for (const auto &s: screen::scaffolds_of(c.mol))
      parents_of[s].push_back(c.id);
    store.candidate_index_[c.id] = static_cast<int>(store.candidates_.size());
    store.candidates_.push_back(std::move(c));
  }

  std::map<std::string, std::string> id_of;
  int serial = 0;
  for (auto &[smiles, parents]: parents_of) {
    Scaffold s;
    char buf[16];
    std::snprintf(buf, sizeof buf, "S%04d", ++serial);
    s.id = buf;
    s.smiles = smiles;
    s.mol = chem::parse_smiles(smiles);
    s.mol.set_id(s.id);
    s.fp = desc::morgan_fingerprint(s.mol, 2, 2048);
    s.descriptors = desc::compute_descriptors(s.mol);
    std::sort(parents.begin(), parents.end());
    s.parents = parents;
    for (const auto &p: parents) {
      const Candidate &c = store.candidates_[store.candidate_index_.at(p)];
      s.max_parent_score = std::max(s.max_parent_score, c.classifier_score);
    }
    id_of[smiles] = s.id;
    store.scaffold_index_[s.id] = static_cast<int>(store.scaffolds_.size());
    store.scaffolds_.push_back(std::move(s));
  }
  for (auto &c: store.candidates_) {
    for (const auto &s: screen::scaffolds_of(c.mol))
      c.scaffold_ids.push_back(id_of.at(s));
    std::sort(c.scaffold_ids.begin(), c.scaffold_ids.end());
  }
  return store;
}

CandidateStore CandidateStore::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw NotFoundError("cannot open candidate file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &ex) {
    throw InvalidArgument(path.string() + ": " + ex.what());
  }
  return from_json(j);
}

const Candidate *CandidateStore::find_candidate(const std::string &id) const {
  auto it = candidate_index_.find(id);
  return it == candidate_index_.end() ? nullptr : &candidates_[it->second];
}

const Scaffold *CandidateStore::find_scaffold(const std::string &id) const {
  auto it = scaffold_index_.find(id);
  return it == scaffold_index_.end() ? nullptr : &scaffolds_[it->second];
}

std::vector<int> CandidateStore::candidate_order() const {
  std::vector<int> order(candidates_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &x = candidates_[a], &y = candidates_[b];
    if (x.classifier_score != y.classifier_score)
      return x.classifier_score > y.classifier_score;
    return x.id < y.id;
  });
  return order;
}

std::vector<int> CandidateStore::queue_order() const {
  std::vector<int> order(scaffolds_.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &x = scaffolds_[a], &y = scaffolds_[b];
    if (x.max_parent_score != y.max_parent_score)
      return x.max_parent_score > y.max_parent_score;
    return x.id < y.id;
  });
  return order;
}

} // namespace pagforge::adj
