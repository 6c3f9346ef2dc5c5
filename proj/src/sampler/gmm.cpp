//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/sampler/gmm.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pagforge/util/error.h"

namespace pagforge::sampler {
namespace {

const double kLog2Pi = std::log(2.0 * std::numbers::pi);

// Row-wise log-sum-exp.
Vec logsumexp_rows(const Mat &a) {
  Vec mx = a.rowwise().maxCoeff();
  return mx + ((a.colwise() - mx).array().exp().rowwise().sum().log()).matrix();
}

struct Run {
  Vec w;
  Mat mu;
  Mat var;
  std::vector<double> ll;
  bool converged = false;
  std::vector<std::string> warnings;
};

Mat kmeanspp(const Mat &x, int k, Rng &rng) {
  const Eigen::Index n = x.rows();
  Mat centers(k, x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(rng.below(n)));
  std::vector<double> d2(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d2[i] = (x.row(i) - centers.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v: d2)
      total += v;
    Eigen::Index pick = total > 0.0 ? static_cast<Eigen::Index>(rng.categorical(d2))
                                    : static_cast<Eigen::Index>(rng.below(n));
    centers.row(c) = x.row(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], (x.row(i) - centers.row(c)).squaredNorm());
  }
  return centers;
}

Run em(const Mat &x, const GmmConfig &cfg, Rng &rng) {
  const Eigen::Index n = x.rows(), d = x.cols();
  Run r;
  int k = cfg.components;
  r.mu = kmeanspp(x, k, rng);
  Vec mean = x.colwise().mean().transpose();
  Vec var0 = ((x.rowwise() - mean.transpose()).array().square().colwise().sum() /
              static_cast<double>(n))
                 .matrix()
                 .transpose()
                 .cwiseMax(cfg.var_floor);
  r.var = var0.transpose().replicate(k, 1);
  r.w = Vec::Constant(k, 1.0 / k);
  Mat x2 = x.array().square().matrix();
  for (int it = 0; it < cfg.max_iter; ++it) {
    GaussianMixture g(r.w, r.mu, r.var);
    Mat lj = g.joint_log(x);
    Vec lse = logsumexp_rows(lj);
    double ll = lse.mean();
    r.ll.push_back(ll);
    if (it > 0 && std::abs(ll - r.ll[r.ll.size() - 2]) < cfg.tol) {
      r.converged = true;
      break;
    }
    Mat resp = (lj.colwise() - lse).array().exp().matrix();  // n x K
    Vec nk = resp.colwise().sum().transpose();
    Mat sx = resp.transpose() * x;    // K x d
    Mat sx2 = resp.transpose() * x2;  // K x d
    std::vector<int> keep;
    for (int c = 0; c < k; ++c) {
      if (nk(c) <= 1e-12 * static_cast<double>(n)) {
        r.warnings.push_back("iteration " + std::to_string(it) + ": pruned empty component");
        continue;
      }
      r.mu.row(c) = sx.row(c) / nk(c);
      Eigen::RowVectorXd v = sx2.row(c) / nk(c) - r.mu.row(c).array().square().matrix();
      r.var.row(c) = v.cwiseMax(cfg.var_floor);
      r.w(c) = nk(c) / static_cast<double>(n);
      bool floored = (r.var.row(c).array() <= cfg.var_floor).all();
      if (floored && d > 0) {
        r.warnings.push_back("iteration " + std::to_string(it) +
                             ": pruned component with every variance at the floor");
        continue;
      }
      keep.push_back(c);
    }
    if (keep.empty())
      throw NumericError("every mixture component degenerated");
    if (static_cast<int>(keep.size()) < k) {
      Vec w(keep.size());
      Mat mu(keep.size(), d), var(keep.size(), d);
      for (std::size_t i = 0; i < keep.size(); ++i) {
        w(i) = r.w(keep[i]);
        mu.row(i) = r.mu.row(keep[i]);
        var.row(i) = r.var.row(keep[i]);
      }
      r.w = w / w.sum();
      r.mu = mu;
      r.var = var;
      k = static_cast<int>(keep.size());
      // The trace restarts: pruning changes the model family.
      r.ll.clear();
    }
  }
  return r;
}

} // namespace

nlohmann::json GmmConfig::to_json() const {
  return { { "components", components }, { "max_iter", max_iter }, { "tol", tol },
           { "var_floor", var_floor },   { "restarts", restarts }, { "seed", seed },
           { "covariance", "diagonal" },   { "init", "kmeans++" } };
}

GaussianMixture::GaussianMixture(Vec weights, Mat means, Mat variances)
    : weights_(std::move(weights)), means_(std::move(means)), variances_(std::move(variances)) {
  const Eigen::Index k = weights_.size();
  if (k == 0 || means_.rows() != k || variances_.rows() != k ||
      variances_.cols() != means_.cols())
    throw InvalidArgument("mixture shapes disagree");
  if ((weights_.array() < 0).any() || std::abs(weights_.sum() - 1.0) > 1e-9)
    throw InvalidArgument("mixture weights must lie on the simplex");
  if (!(variances_.array() > 0).all())
    throw InvalidArgument("mixture variances must be positive");
  log_norm_.resize(k);
  cdf_.resize(k);
  double acc = 0.0;
  for (Eigen::Index c = 0; c < k; ++c) {
    log_norm_(c) = std::log(weights_(c)) -
                   0.5 * (static_cast<double>(dim()) * kLog2Pi +
                          variances_.row(c).array().log().sum());
    acc += weights_(c);
    cdf_(c) = acc;
  }
}

Mat GaussianMixture::joint_log(const Mat &x) const {
  if (x.cols() != dim())
    throw InvalidArgument("point dimension does not match the mixture");
  Mat inv = variances_.cwiseInverse();                    // K x d
  Mat quad = x.array().square().matrix() * inv.transpose();  // n x K
  quad.noalias() -= 2.0 * x * (means_.cwiseProduct(inv)).transpose();
  Vec c = (means_.array().square() * inv.array()).rowwise().sum();
  quad.rowwise() += c.transpose();
  return (-0.5 * quad).rowwise() + log_norm_.transpose();
}

Vec GaussianMixture::logpdf_rows(const Mat &x) const { return logsumexp_rows(joint_log(x)); }

double GaussianMixture::logpdf(const Vec &z) const {
  // Exact per-component form; avoids the expanded quadratic's cancellation.
  Vec lj(components());
  for (int c = 0; c < components(); ++c)
    lj(c) = log_norm_(c) -
            0.5 * ((z.transpose() - means_.row(c)).array().square() / variances_.row(c).array())
                      .sum();
  double mx = lj.maxCoeff();
  return mx + std::log((lj.array() - mx).exp().sum());
}

Vec GaussianMixture::sample_one(Rng &rng, int *component) const {
  double u = rng.uniform() * cdf_(cdf_.size() - 1);
  int c = static_cast<int>(std::upper_bound(cdf_.data(), cdf_.data() + cdf_.size(), u) -
                           cdf_.data());
  c = std::min(c, components() - 1);
  if (component)
    *component = c;
  Vec z(dim());
  for (int j = 0; j < dim(); ++j)
    z(j) = means_(c, j) + std::sqrt(variances_(c, j)) * rng.normal();
  return z;
}

Mat GaussianMixture::sample(int n, std::uint64_t seed) const {
  Rng rng(seed, 0);
  Mat out(n, dim());
  for (int i = 0; i < n; ++i)
    out.row(i) = sample_one(rng).transpose();
  return out;
}

Container GaussianMixture::to_container(const nlohmann::json &extra) const {
  Container c;
  c.header = extra;
  c.header["kind"] = "gmm";
  c.header["components"] = components();
  c.header["dim"] = dim();
  // Weights are stored in double precision in the header: float32 would
  // break the simplex tolerance.
  c.header["weights"] = std::vector<double>(weights_.data(), weights_.data() + weights_.size());
  auto pack = [](const std::string &name, const Mat &m) {
    Tensor t { name, static_cast<int>(m.rows()), static_cast<int>(m.cols()), {} };
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index col = 0; col < m.cols(); ++col)
        t.data.push_back(static_cast<float>(m(r, col)));
    }
    return t;
  };
  c.tensors = { pack("means", means_), pack("variances", variances_) };
  return c;
}

GaussianMixture GaussianMixture::from_container(const Container &c) {
  if (c.header.value("kind", "") != "gmm")
    throw InvalidArgument("container does not hold a mixture");
  auto w = c.header.at("weights").get<std::vector<double>>();
  auto unpack = [&](const std::string &name) {
    const Tensor &t = c.tensor(name);
    Mat m(t.rows, t.cols);
    for (int r = 0; r < t.rows; ++r) {
      for (int col = 0; col < t.cols; ++col)
        m(r, col) = t.data[static_cast<std::size_t>(r) * t.cols + col];
    }
    return m;
  };
  return GaussianMixture(Eigen::Map<Vec>(w.data(), static_cast<Eigen::Index>(w.size())),
                         unpack("means"), unpack("variances"));
}

nlohmann::json GmmFit::report(const GmmConfig &config) const {
  return { { "config", config.to_json() },
           { "components_final", model.components() },
           { "best_restart", best_restart },
           { "restart_scores", restart_scores },
           { "iterations", iterations },
           { "converged", converged },
           { "final_log_likelihood", log_likelihood.empty() ? 0.0 : log_likelihood.back() },
           { "log_likelihood", log_likelihood },
           { "warnings", warnings } };
}

GmmFit fit_gmm(const Mat &x, const GmmConfig &config) {
  if (config.components < 1 || config.restarts < 1 || config.max_iter < 1 ||
      config.var_floor <= 0)
    throw InvalidArgument("gmm config: counts must be positive and the floor > 0");
  if (x.rows() < config.components)
    throw InvalidArgument("fewer points (" + std::to_string(x.rows()) + ") than components (" +
                          std::to_string(config.components) + ")");
  if (!x.allFinite())
    throw InvalidArgument("non-finite latent");
  GmmFit best;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < config.restarts; ++r) {
    Rng rng(config.seed, static_cast<std::uint64_t>(r));
    Run run = em(x, config, rng);
    GaussianMixture g(run.w, run.mu, run.var);
    double score = g.logpdf_rows(x).mean();
    best.restart_scores.push_back(score);
    if (score > best_score) {
      best_score = score;
      best.model = g;
      best.log_likelihood = run.ll;
      best.best_restart = r;
      best.iterations = static_cast<int>(run.ll.size());
      best.converged = run.converged;
      best.warnings = run.warnings;
    }
  }
  return best;
}

} // namespace pagforge::sampler
