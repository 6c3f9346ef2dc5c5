//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SAMPLER_CLASSIFIER_H_
#define PAGFORGE_SAMPLER_CLASSIFIER_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pagforge/util/container.h"

namespace pagforge::sampler {

struct ClassifierConfig {
  int hidden = 100;
  int epochs = 400;  // full-batch Adam steps
  double lr = 1e-2;
  double weight_decay = 1e-4;
  int folds = 5;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// q(a = 1 | z): standardize, one ReLU hidden layer, sigmoid output.
class LatentClassifier {
public:
  LatentClassifier() = default;
  LatentClassifier(int dim, int hidden, std::uint64_t seed);

  int dim() const { return static_cast<int>(w1_.cols()); }
  // Strictly inside (0, 1).
  double predict(const Eigen::VectorXd &z) const;
  Eigen::VectorXd predict_rows(const Eigen::MatrixXd &x) const;

  /// Weighted cross-entropy with inverse-frequency class weights plus L2
  /// on the weight matrices. Gradients are written when grads is non-null
  /// (order: w1, b1, w2, b2).
  double loss(const Eigen::MatrixXd &x, const std::vector<int> &y, double weight_decay,
              std::array<Eigen::MatrixXd, 4> *grads) const;

  std::array<Eigen::MatrixXd *, 4> params() { return { &w1_, &b1_, &w2_, &b2_ }; }
  void set_standardization(Eigen::VectorXd mean, Eigen::VectorXd scale);

  Container to_container(const nlohmann::json &extra = {}) const;
  static LatentClassifier from_container(const Container &c);

private:
  Eigen::MatrixXd standardize(const Eigen::MatrixXd &x) const;

  Eigen::VectorXd mean_, scale_;
  Eigen::MatrixXd w1_, b1_, w2_, b2_;
};

// Fits a classifier on all rows. Throws InvalidArgument for single-class
// labels or mismatched sizes.
LatentClassifier fit_classifier(const Eigen::MatrixXd &x, const std::vector<int> &y,
                                const ClassifierConfig &config);

struct CvReport {
  int folds = 0;
  std::vector<double> fold_balanced_accuracy;
  double balanced_accuracy = 0.0;  // pooled over all held-out predictions
  double mean_fold_balanced_accuracy = 0.0;
  // [true][predicted], class 0 = high LUMO, 1 = low LUMO.
  std::array<std::array<long, 2>, 2> confusion {};

  std::array<std::array<double, 2>, 2> normalized() const;
  long total() const;
  nlohmann::json to_json() const;
  std::string table() const;
};

double balanced_accuracy(const std::vector<int> &truth, const std::vector<int> &pred);

/// Stratified k-fold cross-validation followed by a final fit on all data.
std::pair<LatentClassifier, CvReport> train_classifier(const Eigen::MatrixXd &x,
                                                       const std::vector<int> &y,
                                                       const ClassifierConfig &config);

} // namespace pagforge::sampler

#endif // PAGFORGE_SAMPLER_CLASSIFIER_H_
