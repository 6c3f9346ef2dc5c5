//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pagforge/genmodel/vae.h"
#include "pagforge/util/error.h"
#include "pagforge/util/hash.h"

namespace pagforge::gen {
namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

} // namespace

TrainResult train(Vae &vae, const std::vector<Example> &corpus, const TrainingConfig &config,
                  const std::function<void(int, const LossParts &)> &progress) {
  if (corpus.empty())
    throw InvalidArgument("empty training corpus");
  TrainResult res;
  const std::size_t n = corpus.size();
  const std::size_t bs = static_cast<std::size_t>(config.batch);
  const long per_epoch = static_cast<long>((n + bs - 1) / bs);
  const long total = per_epoch * config.epochs;
  const double anneal = std::max(1.0, config.kl_anneal * static_cast<double>(total));

  auto &params = vae.params();
  std::vector<Mat> m1, m2;
  for (const auto &p: params) {
    m1.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
    m2.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
  }
  std::vector<std::size_t> order(n);
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), 0);
    Rng shuffler(config.seed, 0x10000 + static_cast<std::uint64_t>(epoch));
    shuffle(order, shuffler);
    LossParts sum;
    for (std::size_t lo = 0; lo < n; lo += bs) {
      std::vector<const Example *> batch;
      for (std::size_t i = lo; i < std::min(n, lo + bs); ++i)
        batch.push_back(&corpus[order[i]]);
      LossOptions opt;
      opt.beta = config.beta_max * std::min(1.0, static_cast<double>(step) / anneal);
      opt.aux_weight = config.aux_weight;
      opt.logp_ratio = config.logp_ratio;
      opt.aux_from_mu = config.aux_from_mu;
      opt.seed = derive_seed(config.seed, "step:" + std::to_string(step));
      LossParts lp = vae.loss(batch, opt, true);
      res.losses.push_back(lp.total);
      sum.total += lp.total;
      sum.recon += lp.recon;
      sum.kl += lp.kl;
      sum.tokens += lp.tokens;
      sum.correct += lp.correct;

      double norm2 = 0.0;
      for (const auto &p: params)
        norm2 += p.grad.squaredNorm();
      double norm = std::sqrt(norm2);
      if (!std::isfinite(norm))
        throw NumericError("non-finite gradient at step " + std::to_string(step));
      double clip = norm > config.clip ? config.clip / norm : 1.0;
      ++step;
      double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t k = 0; k < params.size(); ++k) {
        Mat gk = params[k].grad * clip;
        m1[k] = kBeta1 * m1[k] + (1.0 - kBeta1) * gk;
        m2[k] = kBeta2 * m2[k] + (1.0 - kBeta2) * gk.cwiseProduct(gk);
        params[k].value.array() -=
            config.lr * (m1[k].array() / c1) / ((m2[k].array() / c2).sqrt() + kEps);
      }
      vae.round_to_float();
    }
    if (progress)
      progress(epoch, sum);
  }
  res.steps = static_cast<int>(step);
  res.final = evaluate(vae, corpus);
  return res;
}

LossParts evaluate(Vae &vae, const std::vector<Example> &corpus, int batch) {
  LossParts acc;
  if (corpus.empty())
    return acc;
  LossOptions opt;
  opt.sample_z = false;
  opt.dropout = false;
  double weight = 0.0;
  for (std::size_t lo = 0; lo < corpus.size(); lo += static_cast<std::size_t>(batch)) {
    std::vector<const Example *> b;
    for (std::size_t i = lo; i < std::min(corpus.size(), lo + batch); ++i)
      b.push_back(&corpus[i]);
    LossParts lp = vae.loss(b, opt, false);
    double k = static_cast<double>(b.size());
    acc.recon += lp.recon * k;
    acc.kl += lp.kl * k;
    acc.logp += lp.logp * k;
    acc.sa += lp.sa * k;
    acc.fp += lp.fp * k;
    acc.total += lp.total * k;
    acc.tokens += lp.tokens;
    acc.correct += lp.correct;
    weight += k;
  }
  acc.recon /= weight;
  acc.kl /= weight;
  acc.logp /= weight;
  acc.sa /= weight;
  acc.fp /= weight;
  acc.total /= weight;
  return acc;
}

std::string config_hash(const ModelConfig &m, const TrainingConfig &t) {
  nlohmann::json j { { "model", m.to_json() }, { "training", t.to_json() } };
  return sha256_hex(j.dump()).substr(0, 16);
}

void save_checkpoint(const std::filesystem::path &path, const Vae &vae,
                     const data::Vocabulary &vocab, const TrainingConfig &training,
                     const nlohmann::json &metrics) {
  Container c;
  c.header = { { "kind", "vae" },
               { "model", vae.config().to_json() },
               { "training", training.to_json() },
               { "vocabulary", vocab.to_json() },
               { "config_hash", config_hash(vae.config(), training) },
               { "metrics", metrics } };
  c.tensors = vae.tensors();
  write_container(path, c);
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  Container c = read_container(path);
  if (c.header.value("kind", "") != "vae")
    throw InvalidArgument(path.string() + ": not a VAE checkpoint");
  ModelConfig mc = ModelConfig::from_json(c.header.at("model"));
  Checkpoint ck { Vae(mc, 0), data::Vocabulary::from_json(c.header.at("vocabulary")),
                  TrainingConfig::from_json(c.header.at("training")),
                  c.header.value("metrics", nlohmann::json::object()),
                  c.header.value("config_hash", "") };
  if (ck.vocab.size() != mc.vocab)
    throw InvalidArgument(path.string() + ": vocabulary size does not match the model");
  ck.vae.load_tensors(c);
  return ck;
}

} // namespace pagforge::gen
