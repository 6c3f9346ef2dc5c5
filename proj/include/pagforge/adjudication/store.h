//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_ADJUDICATION_STORE_H_
#define PAGFORGE_ADJUDICATION_STORE_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/chem/molecule.h"
#include "pagforge/descriptors/fingerprint.h"
#include "pagforge/descriptors/properties.h"

namespace pagforge::adj {

struct Candidate {
  std::string id;
  std::string smiles;  // canonical
  chem::Molecule mol;
  std::vector<std::string> scaffold_ids;
  desc::DescriptorVector descriptors;
  double classifier_score = 0.0;  // predicted low-LUMO probability
  double max_ref_similarity = 0.0;
};

struct Scaffold {
  std::string id;
  std::string smiles;
  chem::Molecule mol;
  desc::Fingerprint fp;
  desc::DescriptorVector descriptors;
  std::vector<std::string> parents;  // candidate ids, sorted
  double max_parent_score = 0.0;
};

nlohmann::json descriptors_json(const desc::DescriptorVector &d);

/// Read-only set of screened candidates and the scaffolds derived from them.
/// Scaffold ids (S0001, ...) follow the sorted canonical scaffold SMILES, so
/// they are a pure function of the candidate file.
class CandidateStore {
public:
  CandidateStore() = default;

  // Accepts either an array of candidates or {"candidates": [...]}; each
  // entry needs id, smiles, classifier_score in (0,1) and optionally
  // max_ref_similarity in [0,1]. Throws InvalidArgument on bad entries.
  static CandidateStore from_json(const nlohmann::json &j);
  static CandidateStore load(const std::filesystem::path &path);

  const std::vector<Candidate> &candidates() const { return candidates_; }
  const std::vector<Scaffold> &scaffolds() const { return scaffolds_; }

  const Candidate *find_candidate(const std::string &id) const;
  const Scaffold *find_scaffold(const std::string &id) const;

  // Candidate indices by descending score, ties by id.
  std::vector<int> candidate_order() const;
  // Scaffold indices by descending best parent score, ties by id.
  std::vector<int> queue_order() const;

private:
  std::vector<Candidate> candidates_;
  std::vector<Scaffold> scaffolds_;
  std::map<std::string, int> candidate_index_;
  std::map<std::string, int> scaffold_index_;
};

} // namespace pagforge::adj

#endif // PAGFORGE_ADJUDICATION_STORE_H_
