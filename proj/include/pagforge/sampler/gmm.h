//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_SAMPLER_GMM_H_
#define PAGFORGE_SAMPLER_GMM_H_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pagforge/util/container.h"
#include "pagforge/util/rng.h"

namespace pagforge::sampler {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct GmmConfig {
  int components = 100;
  int max_iter = 500;
  double tol = 1e-6;        // on the mean per-point log-likelihood
  double var_floor = 1e-6;
  int restarts = 10;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

/// Diagonal-covariance Gaussian mixture.
class GaussianMixture {
public:
  GaussianMixture() = default;
  // weights: K; means, variances: K x d. Throws on shape or simplex errors.
  GaussianMixture(Vec weights, Mat means, Mat variances);

  int components() const { return static_cast<int>(weights_.size()); }
  int dim() const { return static_cast<int>(means_.cols()); }
  const Vec &weights() const { return weights_; }
  const Mat &means() const { return means_; }
  const Mat &variances() const { return variances_; }

  double logpdf(const Vec &z) const;
  // Row i: log pi_k + log N(x_i | k) for every k (n x K).
  Mat joint_log(const Mat &x) const;
  Vec logpdf_rows(const Mat &x) const;

  Vec sample_one(Rng &rng, int *component = nullptr) const;
  // Rows are samples; stream Rng(seed, 0).
  Mat sample(int n, std::uint64_t seed) const;

  Container to_container(const nlohmann::json &extra = {}) const;
  static GaussianMixture from_container(const Container &c);

private:
  Vec weights_;
  Mat means_;
  Mat variances_;
  Vec log_norm_;  // log pi_k - 0.5 sum log(2 pi var)
  Vec cdf_;
};

struct GmmFit {
  GaussianMixture model;
  std::vector<double> log_likelihood;  // mean per point, per EM iteration, best restart
  std::vector<double> restart_scores;
  int best_restart = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::string> warnings;

  nlohmann::json report(const GmmConfig &config) const;
};

/// EM from k-means++ starts; the restart with the highest final
/// log-likelihood wins. Rows of x are points. Components whose variances all
/// sit at the floor, or whose weight vanishes, are pruned with a warning.
/// Throws InvalidArgument when there are fewer points than components.
GmmFit fit_gmm(const Mat &x, const GmmConfig &config);

} // namespace pagforge::sampler

#endif // PAGFORGE_SAMPLER_GMM_H_
