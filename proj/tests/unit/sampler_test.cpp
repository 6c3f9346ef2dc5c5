//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>

#include "pagforge/sampler/class_sample.h"
#include "pagforge/sampler/classifier.h"
#include "pagforge/sampler/gmm.h"
#include "pagforge/util/error.h"

namespace {

using namespace pagforge;
using sampler::GaussianMixture;
using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd blobs(const std::vector<std::vector<double>> &means, const std::vector<double> &sd,
               const std::vector<int> &counts, std::uint64_t seed) {
  Rng rng(seed);
  long n = 0;
  for (int c: counts)
    n += c;
  MatrixXd x(n, static_cast<Eigen::Index>(means[0].size()));
  long row = 0;
  for (std::size_t k = 0; k < means.size(); ++k) {
    for (int i = 0; i < counts[k]; ++i, ++row) {
      for (std::size_t j = 0; j < means[k].size(); ++j)
        x(row, static_cast<Eigen::Index>(j)) = means[k][j] + sd[k] * rng.normal();
    }
  }
  return x;
}

void expect_monotone(const std::vector<double> &ll) {
  ASSERT_FALSE(ll.empty());
  for (std::size_t i = 1; i < ll.size(); ++i)
    EXPECT_GE(ll[i] - ll[i - 1], -1e-9) << "iteration " << i;
}

TEST(GmmTest, SingleComponentIsClosedFormMle) {
  MatrixXd x = blobs({ { 1.0, -2.0, 0.5 } }, { 1.7 }, { 250 }, 1);
  sampler::GmmConfig cfg;
  cfg.components = 1;
  cfg.restarts = 1;
  auto fit = sampler::fit_gmm(x, cfg);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    double mean = 0.0, var = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      mean += x(i, j);
    mean /= x.rows();
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      var += (x(i, j) - mean) * (x(i, j) - mean);
    var /= x.rows();
    EXPECT_NEAR(fit.model.means()(0, j), mean, 1e-8);
    EXPECT_NEAR(fit.model.variances()(0, j), var, 1e-8);
  }
  EXPECT_NEAR(fit.model.weights()(0), 1.0, 1e-12);
  expect_monotone(fit.log_likelihood);
}

TEST(GmmTest, RecoversThreeComponentMixture) {
  std::vector<std::vector<double>> truth { { -3, 0 }, { 3, 0.5 }, { 0, 4 } };
  MatrixXd x = blobs(truth, { 0.8, 0.6, 1.0 }, { 600, 500, 700 }, 2);
  sampler::GmmConfig cfg;
  cfg.components = 3;
  cfg.seed = 7;
  auto fit = sampler::fit_gmm(x, cfg);
  ASSERT_EQ(fit.model.components(), 3);
  expect_monotone(fit.log_likelihood);
  std::vector<int> perm { 0, 1, 2 };
  double best = 1e9;
  do {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 2; ++j)
        worst = std::max(worst, std::abs(fit.model.means()(perm[k], j) - truth[k][j]));
    }
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_LT(best, 0.1);
  EXPECT_EQ(fit.restart_scores.size(), 10U);
}

TEST(GmmTest, EmIsMonotoneAcrossDatasets) {
  std::vector<MatrixXd> sets {
    blobs({ { 0, 0, 0, 0 } }, { 1.0 }, { 300 }, 3),
    blobs({ { -1, 2 }, { 1, -1 }, { 4, 4 }, { 0, 0 } }, { 0.3, 1.0, 2.0, 0.5 }, { 80, 120, 60, 140 }, 4),
    blobs({ { 0 }, { 0.5 } }, { 1.0, 0.2 }, { 100, 100 }, 5),
  };
  for (const auto &x: sets) {
    for (int k: { 2, 5 }) {
      sampler::GmmConfig cfg;
      cfg.components = k;
      cfg.restarts = 3;
      cfg.seed = 11;
      auto fit = sampler::fit_gmm(x, cfg);
      expect_monotone(fit.log_likelihood);
      EXPECT_NEAR(fit.model.weights().sum(), 1.0, 1e-9);
      EXPECT_TRUE((fit.model.variances().array() >= cfg.var_floor).all());
    }
  }
}

TEST(GmmTest, PrunesCollapsedComponent) {
  MatrixXd x(120, 2);
  Rng rng(6);
  for (int i = 0; i < 60; ++i)
    x.row(i) << 0.0, 0.0;
  for (int i = 60; i < 120; ++i)
    x.row(i) << 6.0 + rng.normal(), 6.0 + rng.normal();
  sampler::GmmConfig cfg;
  cfg.components = 2;
  cfg.restarts = 1;
  auto fit = sampler::fit_gmm(x, cfg);
  EXPECT_EQ(fit.model.components(), 1);
  EXPECT_FALSE(fit.warnings.empty());
}

TEST(GmmTest, Errors) {
  sampler::GmmConfig cfg;
  cfg.components = 10;
  EXPECT_THROW(sampler::fit_gmm(MatrixXd::Zero(5, 2), cfg), InvalidArgument);
  EXPECT_THROW(GaussianMixture(VectorXd::Constant(2, 0.4), MatrixXd::Zero(2, 1),
                               MatrixXd::Ones(2, 1)),
               InvalidArgument);
}

TEST(GmmTest, LogpdfAtMean) {
  VectorXd w(1);
  w << 1.0;
  MatrixXd mu(1, 3), var(1, 3);
  mu << 0.5, -1, 2;
  var << 0.25, 2.0, 3.0;
  GaussianMixture g(w, mu, var);
  double expect = 0.0;
  for (int j = 0; j < 3; ++j)
    expect += -0.5 * std::log(2 * std::numbers::pi * var(0, j));
  EXPECT_NEAR(g.logpdf(mu.row(0).transpose()), expect, 1e-12);
  EXPECT_NEAR(g.logpdf_rows(mu)(0), expect, 1e-12);
}

GaussianMixture toy_1d() {
  VectorXd w(3);
  w << 0.2, 0.5, 0.3;
  MatrixXd mu(3, 1), var(3, 1);
  mu << -2.0, 0.5, 3.0;
  var << 0.3, 1.0, 0.6;
  return GaussianMixture(w, mu, var);
}

TEST(GmmTest, SamplingOccupancyAndDensityNormalization) {
  auto g = toy_1d();
  Rng rng(13);
  std::vector<long> counts(3, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    int c;
    g.sample_one(rng, &c);
    ++counts[c];
  }
  for (int c = 0; c < 3; ++c)
    EXPECT_NEAR(static_cast<double>(counts[c]) / n, g.weights()(c), 0.01);
  EXPECT_EQ(g.sample(5, 3), g.sample(5, 3));

  // Trapezoid rule on a fine grid.
  double h = 1e-3, integral = 0.0;
  for (double z = -20.0; z < 20.0; z += h) {
    VectorXd a(1), b(1);
    a << z;
    b << z + h;
    integral += 0.5 * h * (std::exp(g.logpdf(a)) + std::exp(g.logpdf(b)));
  }
  EXPECT_NEAR(integral, 1.0, 1e-3);
}

TEST(GmmTest, ContainerRoundTrip) {
  auto g = toy_1d();
  auto path = std::filesystem::temp_directory_path() / "pagforge_gmm_test.ckpt";
  write_container(path, g.to_container({ { "note", "x" } }));
  auto back = GaussianMixture::from_container(read_container(path));
  EXPECT_EQ(back.weights(), g.weights());
  EXPECT_TRUE(back.means().isApprox(g.means(), 1e-6));
  std::filesystem::remove(path);
}

// ---------------------------------------------------------------------------

TEST(ClassifierTest, GradientMatchesFiniteDifferences) {
  MatrixXd x = blobs({ { 0, 0, 0 }, { 1, 1, 1 } }, { 1.0, 1.0 }, { 7, 5 }, 21);
  std::vector<int> y(12, 0);
  std::fill(y.begin() + 7, y.end(), 1);
  sampler::LatentClassifier m(3, 6, 4);
  std::array<MatrixXd, 4> g;
  m.loss(x, y, 0.01, &g);
  auto params = m.params();
  double worst = 0.0;
  for (int k = 0; k < 4; ++k) {
    for (Eigen::Index i = 0; i < params[k]->size(); ++i) {
      double keep = params[k]->data()[i], h = 1e-6;
      params[k]->data()[i] = keep + h;
      double up = m.loss(x, y, 0.01, nullptr);
      params[k]->data()[i] = keep - h;
      double down = m.loss(x, y, 0.01, nullptr);
      params[k]->data()[i] = keep;
      double num = (up - down) / (2 * h), a = g[k].data()[i];
      worst = std::max(worst, std::abs(a - num) / std::max({ std::abs(a), std::abs(num), 1e-4 }));
    }
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(ClassifierTest, SeparableBlobs) {
  const int d = 8;
  std::vector<double> a(d, 0.0), b(d, 0.0);
  b[0] = 8.0;  // each blob 4 sigma from the separating hyperplane
  MatrixXd x = blobs({ a, b }, { 1.0, 1.0 }, { 300, 100 }, 31);
  std::vector<int> y(400, 0);
  std::fill(y.begin() + 300, y.end(), 1);
  sampler::ClassifierConfig cfg;
  cfg.seed = 2;
  auto [model, rep] = sampler::train_classifier(x, y, cfg);
  EXPECT_GE(rep.balanced_accuracy, 0.98);
  EXPECT_EQ(rep.total(), 400);
  EXPECT_EQ(rep.confusion[1][0] + rep.confusion[1][1], 100);
  EXPECT_EQ(rep.fold_balanced_accuracy.size(), 5U);
  double p = model.predict(x.row(350).transpose());
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  auto table = rep.table();
  EXPECT_NE(table.find("rows: true label, columns: predicted label"), std::string::npos);
  EXPECT_NE(table.find("low LUMO"), std::string::npos);
}

TEST(ClassifierTest, PermutedLabelsAreAtChance) {
  const int n = 2000, d = 8;
  MatrixXd x = blobs({ std::vector<double>(d, 0.0) }, { 1.0 }, { n }, 41);
  Rng rng(42);
  std::vector<int> y(n);
  for (int &v: y)
    v = rng.uniform() < 0.3 ? 1 : 0;
  sampler::ClassifierConfig cfg;
  cfg.seed = 3;
  auto [model, rep] = sampler::train_classifier(x, y, cfg);
  EXPECT_NEAR(rep.balanced_accuracy, 0.5, 0.05);
  EXPECT_EQ(rep.total(), n);
}

TEST(ClassifierTest, RejectsSingleClass) {
  MatrixXd x = MatrixXd::Random(10, 2);
  EXPECT_THROW(sampler::train_classifier(x, std::vector<int>(10, 1), {}), InvalidArgument);
}

TEST(ClassifierTest, ContainerRoundTrip) {
  MatrixXd x = blobs({ { 0, 0 }, { 3, 3 } }, { 1.0, 1.0 }, { 30, 30 }, 8);
  std::vector<int> y(60, 0);
  std::fill(y.begin() + 30, y.end(), 1);
  sampler::ClassifierConfig cfg;
  cfg.epochs = 50;
  auto m = sampler::fit_classifier(x, y, cfg);
  auto back = sampler::LatentClassifier::from_container(m.to_container());
  EXPECT_NEAR(back.predict(x.row(3).transpose()), m.predict(x.row(3).transpose()), 1e-5);
}

// ---------------------------------------------------------------------------

sampler::AttributeSpec constant_spec(double q) {
  return { { { "const", [q](const VectorXd &) { return q; }, true } } };
}

TEST(ClassSampleTest, AlwaysAcceptingClassifier) {
  sampler::SampleConfig cfg;
  cfg.target_accepted = 500;
  cfg.max_draws = 10000;
  cfg.seed = 1;
  auto res = sampler::class_sample(toy_1d(), constant_spec(1.0), nullptr, nullptr, cfg);
  EXPECT_EQ(res.accepted, 500);
  EXPECT_EQ(res.total_draws, 500);
  EXPECT_EQ(res.acceptance_rate(), 1.0);
}

TEST(ClassSampleTest, RareAndImpossibleAcceptance) {
  sampler::SampleConfig cfg;
  cfg.target_accepted = 100000;
  cfg.max_draws = 40000;
  cfg.seed = 2;
  auto res = sampler::class_sample(toy_1d(), constant_spec(0.01), nullptr, nullptr, cfg);
  EXPECT_NEAR(res.acceptance_rate(), 0.01, 0.003);
  EXPECT_EQ(res.total_draws, 40000);
  cfg.max_draws = 1000;
  EXPECT_THROW(sampler::class_sample(toy_1d(), constant_spec(0.0), nullptr, nullptr, cfg),
               sampler::BudgetExhausted);
}

TEST(ClassSampleTest, ThreadCountDoesNotChangeResult) {
  sampler::AttributeSpec spec { { { "logistic",
                                    [](const VectorXd &z) { return 1.0 / (1.0 + std::exp(-z(0))); },
                                    true } } };
  sampler::SampleConfig cfg;
  cfg.target_accepted = 300;
  cfg.max_draws = 5000;
  cfg.seed = 9;
  auto decoder = [](const VectorXd &z, Rng &rng) {
    return std::to_string(z(0)) + ":" + std::to_string(rng.below(10));
  };
  cfg.threads = 1;
  auto a = sampler::class_sample(toy_1d(), spec, decoder, nullptr, cfg);
  cfg.threads = 4;
  auto b = sampler::class_sample(toy_1d(), spec, decoder, nullptr, cfg);
  ASSERT_EQ(a.draws.size(), b.draws.size());
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    EXPECT_EQ(a.draws[i].z, b.draws[i].z);
    EXPECT_EQ(a.draws[i].decoded, b.draws[i].decoded);
  }
  for (const auto &d: a.draws) {
    EXPECT_GT(d.probability, 0.0);
    EXPECT_LE(d.probability, 1.0);
    EXPECT_EQ(d.accepted, d.uniform < d.probability);
  }
  EXPECT_GE(a.mean_accepted_probability, a.mean_proposal_probability);
  EXPECT_EQ(a.accepted, 300);
}

// Target density Q(z) q(z) / Z for the toy mixture, written out directly.
double toy_density(double z) {
  const double w[] = { 0.2, 0.5, 0.3 }, m[] = { -2.0, 0.5, 3.0 }, v[] = { 0.3, 1.0, 0.6 };
  double q = 0.0;
  for (int k = 0; k < 3; ++k)
    q += w[k] * std::exp(-0.5 * (z - m[k]) * (z - m[k]) / v[k]) / std::sqrt(2 * std::numbers::pi * v[k]);
  return q / (1.0 + std::exp(-z));
}

double simpson(double a, double b, int n) {
  double h = (b - a) / n, s = toy_density(a) + toy_density(b);
  for (int i = 1; i < n; ++i)
    s += toy_density(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

TEST(ClassSampleTest, AcceptedSamplesFollowConditionalDensity) {
  sampler::AttributeSpec spec { { { "logistic",
                                    [](const VectorXd &z) { return 1.0 / (1.0 + std::exp(-z(0))); },
                                    true } } };
  sampler::SampleConfig cfg;
  cfg.target_accepted = 50000;
  cfg.max_draws = 1000000;
  cfg.seed = 2026;
  cfg.keep_rejected = false;
  auto res = sampler::class_sample(toy_1d(), spec, nullptr, nullptr, cfg);
  ASSERT_EQ(res.accepted, 50000);

  const int bins = 20;
  const double lo = -3.0, hi = 5.0, width = (hi - lo) / bins;
  std::vector<double> edges { -30.0 };
  for (int i = 1; i < bins; ++i)
    edges.push_back(lo + i * width);
  edges.push_back(30.0);
  double z_total = simpson(-30.0, 30.0, 60000);
  std::vector<long> observed(bins, 0);
  for (const auto *d: res.accepted_draws()) {
    int b = static_cast<int>(std::upper_bound(edges.begin() + 1, edges.end() - 1, d->z(0)) -
                             (edges.begin() + 1));
    ++observed[b];
  }
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) {
    double expected = res.accepted * simpson(edges[b], edges[b + 1], 20000) / z_total;
    ASSERT_GT(expected, 5.0);
    chi2 += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  boost::math::chi_squared dist(bins - 1);
  double p = 1.0 - boost::math::cdf(dist, chi2);
  EXPECT_GT(p, 0.01) << "chi2 = " << chi2;
  // Acceptance rate estimates the normalizer.
  EXPECT_NEAR(res.acceptance_rate(), z_total, 0.01);
}

} // namespace
