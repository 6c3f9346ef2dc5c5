//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SCREENING_ANALYSIS_H_
#define PAGFORGE_SCREENING_ANALYSIS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/chem/molecule.h"
#include "pagforge/descriptors/fingerprint.h"

namespace pagforge::screen {

// Bin index of value v in [0, 1] for width w; 1.0 lands in the last bin.
int bin_of(double v, double width);
int bin_count(double width);

struct BinningConfig {
  double bin_width = 0.1;
  int cap = 100;
  std::uint64_t seed = 0;
  desc::SimilarityKind kind = desc::SimilarityKind::kDice;
};

struct BinningResult {
  std::vector<double> max_similarity;  // per generated molecule
  std::vector<int> bin;                // -1 for exact matches
  std::vector<int> selected;           // indices into generated, by (bin, index)
  std::vector<int> members_per_bin;
  std::vector<int> selected_per_bin;
  int exact_matches = 0;

  nlohmann::json report() const;
};

/// Bins generated molecules by their maximum similarity to any reference
/// and keeps at most cap per bin, chosen uniformly with a stream seeded by
/// (seed, bin). Similarity 1.0 counts as an exact match and is excluded.
/// Throws InvalidArgument when the reference set is empty.
BinningResult similarity_binning(const std::vector<desc::Fingerprint> &generated,
                                 const std::vector<desc::Fingerprint> &reference,
                                 const BinningConfig &config);

struct DiceHistogram {
  double bin_width = 0.05;
  std::vector<long> counts;
  int mode_bin = 0;  // lowest bin among those with the largest count
  long total = 0;

  std::string csv() const;
};

// All n(n-1)/2 pairwise Dice distances. Throws InvalidArgument for n < 2.
DiceHistogram dice_histogram(const std::vector<desc::Fingerprint> &fps,
                             double bin_width = 0.05, int threads = 0);

struct ScaffoldRecord {
  std::string scaffold;  // canonical SMILES
  std::vector<std::string> parents;
  bool is_sulfonium = false;
  bool is_novel = false;
};

// Distinct non-empty Murcko scaffolds of the BRICS fragments of mol.
std::vector<std::string> scaffolds_of(const chem::Molecule &mol);

struct ScaffoldColumn {
  int molecules = 0;
  int all_scaffolds = 0;
  int sulfonium_scaffolds = 0;
};

struct ScaffoldSummary {
  ScaffoldColumn reference;
  ScaffoldColumn generated;
  int novel_sulfonium_scaffolds = 0;
  std::vector<ScaffoldRecord> records;  // generated scaffolds, sorted

  std::string table() const;
  nlohmann::json to_json() const;
};

/// Scaffold accounting for a generated set against a reference set, both
/// processed identically. Parent ids come from Molecule::id() (falling back
/// to the position).
ScaffoldSummary scaffold_summary(const std::vector<chem::Molecule> &generated,
                                 const std::vector<chem::Molecule> &reference);

} // namespace pagforge::screen

#endif // PAGFORGE_SCREENING_ANALYSIS_H_
