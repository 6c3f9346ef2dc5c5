//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/sampler/classifier.h"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "pagforge/util/error.h"
#include "pagforge/util/rng.h"

namespace pagforge::sampler {
namespace {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

constexpr double kProbFloor = 1e-12;

void check_labels(const Mat &x, const std::vector<int> &y) {
  if (static_cast<std::size_t>(x.rows()) != y.size() || y.empty())
    throw InvalidArgument("latents and labels differ in length");
  int pos = 0;
  for (int v: y) {
    if (v != 0 && v != 1)
      throw InvalidArgument("labels must be 0 or 1");
    pos += v;
  }
  if (pos == 0 || pos == static_cast<int>(y.size()))
    throw InvalidArgument("both classes must be present");
}

Mat pack(const Tensor &t) {
  Mat m(t.rows, t.cols);
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c)
      m(r, c) = t.data[static_cast<std::size_t>(r) * t.cols + c];
  }
  return m;
}

Tensor unpack(const std::string &name, const Mat &m) {
  Tensor t { name, static_cast<int>(m.rows()), static_cast<int>(m.cols()), {} };
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      t.data.push_back(static_cast<float>(m(r, c)));
  }
  return t;
}

} // namespace

nlohmann::json ClassifierConfig::to_json() const {
  return { { "hidden", hidden }, { "epochs", epochs }, { "lr", lr },
           { "weight_decay", weight_decay }, { "folds", folds }, { "seed", seed },
           { "class_weights", "inverse_frequency" } };
}

LatentClassifier::LatentClassifier(int dim, int hidden, std::uint64_t seed)
    : mean_(Vec::Zero(dim)), scale_(Vec::Ones(dim)) {
  if (dim <= 0 || hidden <= 0)
    throw InvalidArgument("classifier sizes must be positive");
  Rng rng(seed, 0xc1a55);
  auto init = [&](int r, int c, double s) {
    Mat m(r, c);
    for (Eigen::Index i = 0; i < m.size(); ++i)
      m.data()[i] = (2.0 * rng.uniform() - 1.0) * s;
    return m;
  };
  double s1 = 1.0 / std::sqrt(static_cast<double>(dim));
  double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  w1_ = init(hidden, dim, s1);
  b1_ = init(hidden, 1, s1);
  w2_ = init(1, hidden, s2);
  b2_ = init(1, 1, s2);
}

void LatentClassifier::set_standardization(Vec mean, Vec scale) {
  mean_ = std::move(mean);
  scale_ = std::move(scale);
}

Mat LatentClassifier::standardize(const Mat &x) const {
  if (x.cols() != dim())
    throw InvalidArgument("latent dimension does not match the classifier");
  return ((x.rowwise() - mean_.transpose()).array().rowwise() / scale_.transpose().array())
      .matrix();
}

Vec LatentClassifier::predict_rows(const Mat &x) const {
  Mat h = (w1_ * standardize(x).transpose()).colwise() + b1_.col(0);
  h = h.cwiseMax(0.0);
  Eigen::RowVectorXd logit = (w2_ * h).array() + b2_(0, 0);
  Vec p(logit.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    p(i) = std::clamp(1.0 / (1.0 + std::exp(-logit(i))), kProbFloor, 1.0 - kProbFloor);
  return p;
}

double LatentClassifier::predict(const Vec &z) const {
  return predict_rows(z.transpose())(0);
}

double LatentClassifier::loss(const Mat &x, const std::vector<int> &y, double weight_decay,
                              std::array<Mat, 4> *grads) const {
  const Eigen::Index n = x.rows();
  long pos = 0;
  for (int v: y)
    pos += v;
  // Each class carries half of the total weight.
  const double wpos = 0.5 / static_cast<double>(pos);
  const double wneg = 0.5 / static_cast<double>(n - pos);
  Mat xs = standardize(x).transpose();  // d x n
  Mat pre = (w1_ * xs).colwise() + b1_.col(0);
  Mat h = pre.cwiseMax(0.0);
  Eigen::RowVectorXd logit = (w2_ * h).array() + b2_(0, 0);
  double total = 0.0;
  Eigen::RowVectorXd dlogit(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double l = logit(i), t = y[i];
    double wi = y[i] ? wpos : wneg;
    double softplus = l > 0 ? l + std::log1p(std::exp(-l)) : std::log1p(std::exp(l));
    total += wi * (softplus - t * l);
    dlogit(i) = wi * (1.0 / (1.0 + std::exp(-l)) - t);
  }
  total += 0.5 * weight_decay * (w1_.squaredNorm() + w2_.squaredNorm());
  if (grads) {
    auto &g = *grads;
    g[2] = dlogit * h.transpose() + weight_decay * w2_;
    g[3] = Mat::Constant(1, 1, dlogit.sum());
    Mat dh = w2_.transpose() * dlogit;
    dh.array() *= (pre.array() > 0.0).cast<double>();
    g[0] = dh * xs.transpose() + weight_decay * w1_;
    g[1] = dh.rowwise().sum();
  }
  return total;
}

Container LatentClassifier::to_container(const nlohmann::json &extra) const {
  Container c;
  c.header = extra;
  c.header["kind"] = "latent_classifier";
  c.header["dim"] = dim();
  c.header["hidden"] = static_cast<int>(w1_.rows());
  c.tensors = { unpack("mean", mean_), unpack("scale", scale_), unpack("w1", w1_),
                unpack("b1", b1_),     unpack("w2", w2_),       unpack("b2", b2_) };
  return c;
}

LatentClassifier LatentClassifier::from_container(const Container &c) {
  if (c.header.value("kind", "") != "latent_classifier")
    throw InvalidArgument("container does not hold a latent classifier");
  LatentClassifier m;
  m.mean_ = pack(c.tensor("mean"));
  m.scale_ = pack(c.tensor("scale"));
  m.w1_ = pack(c.tensor("w1"));
  m.b1_ = pack(c.tensor("b1"));
  m.w2_ = pack(c.tensor("w2"));
  m.b2_ = pack(c.tensor("b2"));
  if (m.w1_.cols() != m.mean_.size() || m.w2_.cols() != m.w1_.rows())
    throw InvalidArgument("latent classifier tensors have inconsistent shapes");
  return m;
}

LatentClassifier fit_classifier(const Mat &x, const std::vector<int> &y,
                                const ClassifierConfig &config) {
  check_labels(x, y);
  LatentClassifier model(static_cast<int>(x.cols()), config.hidden, config.seed);
  Vec mean = x.colwise().mean().transpose();
  Vec sd = ((x.rowwise() - mean.transpose()).array().square().colwise().mean().sqrt())
               .matrix()
               .transpose();
  for (Eigen::Index j = 0; j < sd.size(); ++j) {
    if (!(sd(j) > 1e-12))
      sd(j) = 1.0;
  }
  model.set_standardization(mean, sd);
  auto params = model.params();
  std::array<Mat, 4> m1, m2, g;
  for (int k = 0; k < 4; ++k) {
    m1[k] = Mat::Zero(params[k]->rows(), params[k]->cols());
    m2[k] = m1[k];
  }
  for (int step = 1; step <= config.epochs; ++step) {
    model.loss(x, y, config.weight_decay, &g);
    double c1 = 1.0 - std::pow(0.9, step), c2 = 1.0 - std::pow(0.999, step);
    for (int k = 0; k < 4; ++k) {
      m1[k] = 0.9 * m1[k] + 0.1 * g[k];
      m2[k] = 0.999 * m2[k] + 0.001 * g[k].cwiseProduct(g[k]);
      params[k]->array() -= config.lr * (m1[k].array() / c1) / ((m2[k].array() / c2).sqrt() + 1e-8);
    }
  }
  return model;
}

double balanced_accuracy(const std::vector<int> &truth, const std::vector<int> &pred) {
  long tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i])
      (pred[i] ? tp : fn)++;
    else
      (pred[i] ? fp : tn)++;
  }
  double rp = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  double rn = tn + fp ? static_cast<double>(tn) / (tn + fp) : 0.0;
  int classes = (tp + fn > 0) + (tn + fp > 0);
  return classes ? (rp + rn) / classes : 0.0;
}

std::array<std::array<double, 2>, 2> CvReport::normalized() const {
  std::array<std::array<double, 2>, 2> out {};
  for (int t = 0; t < 2; ++t) {
    long row = confusion[t][0] + confusion[t][1];
    for (int p = 0; p < 2; ++p)
      out[t][p] = row ? static_cast<double>(confusion[t][p]) / row : 0.0;
  }
  return out;
}

long CvReport::total() const {
  return confusion[0][0] + confusion[0][1] + confusion[1][0] + confusion[1][1];
}

nlohmann::json CvReport::to_json() const {
  auto n = normalized();
  return { { "folds", folds },
           { "fold_balanced_accuracy", fold_balanced_accuracy },
           { "mean_fold_balanced_accuracy", mean_fold_balanced_accuracy },
           { "balanced_accuracy", balanced_accuracy },
           { "labels", { "high LUMO", "low LUMO" } },
           { "confusion_raw", { { confusion[0][0], confusion[0][1] }, { confusion[1][0], confusion[1][1] } } },
           { "confusion_normalized", { { n[0][0], n[0][1] }, { n[1][0], n[1][1] } } } };
}

std::string CvReport::table() const {
  auto n = normalized();
  const char *labels[] = { "high LUMO", "low LUMO" };
  std::ostringstream os;
  os << "Confusion matrix (rows: true label, columns: predicted label)\n";
  os << std::left << std::setw(12) << "" << std::right << std::setw(20) << labels[0]
     << std::setw(20) << labels[1] << '\n';
  for (int t = 0; t < 2; ++t) {
    os << std::left << std::setw(12) << labels[t] << std::right;
    for (int p = 0; p < 2; ++p) {
      std::ostringstream cell;
      cell << std::fixed << std::setprecision(3) << n[t][p] << " (" << confusion[t][p] << ")";
      os << std::setw(20) << cell.str();
    }
    os << '\n';
  }
  os << std::fixed << std::setprecision(3) << "Balanced accuracy (" << folds
     << "-fold CV): " << balanced_accuracy << '\n';
  return os.str();
}

std::pair<LatentClassifier, CvReport> train_classifier(const Mat &x, const std::vector<int> &y,
                                                       const ClassifierConfig &config) {
  check_labels(x, y);
  if (config.folds < 2)
    throw InvalidArgument("cross-validation needs at least two folds");
  std::vector<int> fold(y.size());
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == cls)
        idx.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(idx.size()) < config.folds)
      throw InvalidArgument("each class needs at least one sample per fold");
    Rng rng(config.seed, 0xf01d + static_cast<std::uint64_t>(cls));
    shuffle(idx, rng);
    for (std::size_t k = 0; k < idx.size(); ++k)
      fold[idx[k]] = static_cast<int>(k % static_cast<std::size_t>(config.folds));
  }
  CvReport rep;
  rep.folds = config.folds;
  std::vector<int> pooled_pred(y.size());
  for (int f = 0; f < config.folds; ++f) {
    std::vector<int> tr, te;
    for (std::size_t i = 0; i < y.size(); ++i)
      (fold[i] == f ? te : tr).push_back(static_cast<int>(i));
    Mat xtr(tr.size(), x.cols()), xte(te.size(), x.cols());
    std::vector<int> ytr, yte, pte;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      xtr.row(i) = x.row(tr[i]);
      ytr.push_back(y[tr[i]]);
    }
    for (std::size_t i = 0; i < te.size(); ++i) {
      xte.row(i) = x.row(te[i]);
      yte.push_back(y[te[i]]);
    }
    ClassifierConfig fc = config;
    fc.seed = config.seed + 1 + static_cast<std::uint64_t>(f);
    auto model = fit_classifier(xtr, ytr, fc);
    Eigen::VectorXd p = model.predict_rows(xte);
    for (std::size_t i = 0; i < te.size(); ++i) {
      int pred = p(i) >= 0.5 ? 1 : 0;
      pte.push_back(pred);
      pooled_pred[te[i]] = pred;
      ++rep.confusion[yte[i]][pred];
    }
    rep.fold_balanced_accuracy.push_back(balanced_accuracy(yte, pte));
  }
  double s = 0.0;
  for (double v: rep.fold_balanced_accuracy)
    s += v;
  rep.mean_fold_balanced_accuracy = s / config.folds;
  rep.balanced_accuracy = balanced_accuracy(y, pooled_pred);
  return { fit_classifier(x, y, config), rep };
}

} // namespace pagforge::sampler
