//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_EVAL_METRICS_H_
#define PAGFORGE_EVAL_METRICS_H_

#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pagforge/chem/molecule.h"
#include "pagforge/descriptors/fingerprint.h"
#include "pagforge/descriptors/properties.h"

namespace pagforge::eval {

using Counts = std::map<std::string, long>;

// All set-level metrics throw InvalidArgument on empty input.
double uniqueness(const std::vector<std::string> &canonical);
// Fraction of the distinct generated structures absent from train.
double novelty(const std::vector<std::string> &canonical,
               const std::unordered_set<std::string> &train);
// 1 - mean Tanimoto over all ordered pairs, self pairs included.
double intdiv(const std::vector<desc::Fingerprint> &fps, int threads = 0);
// Mean over gen of the best Tanimoto to any reference.
double snn(const std::vector<desc::Fingerprint> &gen,
           const std::vector<desc::Fingerprint> &ref, int threads = 0);

double cosine(const Counts &a, const Counts &b);

// Fragment counts: each molecule contributes its distinct BRICS fragments.
Counts fragment_counts(const std::vector<chem::Molecule> &mols);
// Whole-molecule Murcko scaffolds; acyclic molecules contribute nothing.
Counts scaffold_counts(const std::vector<chem::Molecule> &mols);

// Throws InvalidArgument when either side has no scaffold.
double scaffold_similarity(const Counts &gen, const Counts &ref);

struct FrechetResult {
  double distance = 0.0;
  bool ridge = false;  // 1e-6 I added to a singular covariance
};

FrechetResult frechet_distance(const Eigen::VectorXd &mu1, const Eigen::MatrixXd &s1,
                               const Eigen::VectorXd &mu2, const Eigen::MatrixXd &s2);

// Rows are samples. Both sets are z-scored with the reference moments
// before the Gaussian fit. Needs at least two rows per side.
FrechetResult frechet_descriptor_distance(const Eigen::MatrixXd &gen,
                                          const Eigen::MatrixXd &ref);

Eigen::MatrixXd descriptor_matrix(const std::vector<desc::DescriptorVector> &d);

// Earth mover's distance between two empirical distributions on the line.
double wasserstein1(std::vector<double> a, std::vector<double> b);

struct MetricConfig {
  int fp_radius = desc::kDefaultRadius;
  int fp_width = desc::kDefaultWidth;
  int threads = 0;

  nlohmann::json to_json() const;
  std::string hash() const;
};

struct MetricReport {
  double fcd_substitute = 0.0;
  bool fcd_ridge = false;
  double snn = 0.0;
  double frag = 0.0;
  double scaf = 0.0;
  double wasserstein_mw = 0.0;
  double wasserstein_logp = 0.0;
  double wasserstein_sa = 0.0;
  double intdiv = 0.0;
  double uniqueness = 0.0;
  double novelty = 0.0;
  std::size_t generated = 0;
  std::size_t reference = 0;
  std::size_t training = 0;
  std::string config_hash;

  nlohmann::json to_json() const;
  // Aligned text table, one row per comparison set.
  std::string table(const std::string &label) const;
};

MetricReport evaluate(const std::vector<chem::Molecule> &generated,
                      const std::vector<chem::Molecule> &reference,
                      const std::unordered_set<std::string> &train_canonical,
                      const MetricConfig &config = {});

} // namespace pagforge::eval

#endif // PAGFORGE_EVAL_METRICS_H_
