//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_GENMODEL_VAE_H_
#define PAGFORGE_GENMODEL_VAE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "pagforge/chem/molecule.h"
#include "pagforge/dataset/tokenizer.h"
#include "pagforge/util/container.h"
#include "pagforge/util/rng.h"

namespace pagforge::gen {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

struct ModelConfig {
  int vocab = 0;
  int embed = 32;
  int hidden = 64;
  int latent = 128;
  int aux_hidden = 50;
  int aux_layers = 4;
  double dropout = 0.2;
  int fp_bits = 512;
  int max_len = data::kMaxTokens;

  nlohmann::json to_json() const;
  static ModelConfig from_json(const nlohmann::json &j);
};

struct TrainingConfig {
  double lr = 1e-3;
  int epochs = 30;
  int batch = 32;
  double kl_anneal = 0.3;  // fraction of steps over which beta rises 0 -> beta_max
  double beta_max = 1.0;
  double aux_weight = 1.0;
  double logp_ratio = 0.1;
  double clip = 5.0;
  bool aux_from_mu = false;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  static TrainingConfig from_json(const nlohmann::json &j);
};

// One tokenized molecule with its auxiliary targets.
struct Example {
  std::vector<int> tokens;  // start ... end
  double logp = 0.0;
  double sa = 0.0;
  std::vector<double> fp;   // 0/1 per folded bit
};

/// Tokenizes and labels molecules. Throws OutOfVocabulary / Overlength.
std::vector<Example> make_examples(const std::vector<chem::Molecule> &mols,
                                   const data::Vocabulary &vocab, int fp_bits,
                                   int max_len = data::kMaxTokens);

struct LossOptions {
  double beta = 1.0;
  double aux_weight = 1.0;
  double logp_ratio = 0.1;
  bool sample_z = true;     // false: z = mu
  bool dropout = true;
  bool aux_from_mu = false;
  std::uint64_t seed = 0;   // noise and dropout streams
};

struct LossParts {
  double recon = 0.0;  // summed token cross-entropy per sequence
  double kl = 0.0;     // per sequence
  double logp = 0.0;   // mean L1
  double sa = 0.0;     // mean L1
  double fp = 0.0;     // mean per-bit cross-entropy
  double total = 0.0;
  long tokens = 0;
  long correct = 0;

  double accuracy() const { return tokens ? static_cast<double>(correct) / tokens : 0.0; }
  nlohmann::json to_json() const;
};

struct Param {
  std::string name;
  Mat value;
  Mat grad;
};

struct Encoding {
  Vec mu;
  Vec sigma;
  Vec z;
};

/// Sequence VAE: bidirectional GRU encoder, GRU decoder conditioned on z at
/// every step, and three MLP heads (logP, SA, fingerprint) reading z.
class Vae {
public:
  Vae(const ModelConfig &config, std::uint64_t seed);

  const ModelConfig &config() const { return config_; }
  std::vector<Param> &params() { return params_; }
  const std::vector<Param> &params() const { return params_; }
  Param &param(const std::string &name);
  const Param &param(const std::string &name) const;

  /// Loss over a batch. With want_grad the gradients of the total are
  /// written to every Param::grad (overwriting).
  LossParts loss(const std::vector<const Example *> &batch, const LossOptions &opt,
                 bool want_grad);

  // Noise for z comes from Rng(seed, 0); deterministic returns z = mu.
  std::vector<Encoding> encode(const std::vector<std::vector<int>> &tokens,
                               std::uint64_t seed, bool deterministic) const;

  /// Token ids from start to end (or max_len content tokens). tau <= 0 is
  /// greedy; otherwise samples softmax(logits / tau) from rng.
  std::vector<int> decode(const Vec &z, double tau = 0.0, Rng *rng = nullptr) const;

  // Rounds every parameter to the nearest float.
  void round_to_float();

  std::vector<Tensor> tensors() const;
  void load_tensors(const Container &c);

private:
  struct EncoderCache;
  void encoder_forward(const std::vector<const std::vector<int> *> &seqs,
                       EncoderCache &c) const;
  void add(const std::string &name, int rows, int cols, double scale, Rng &rng);
  const Mat &w(const std::string &name) const { return param(name).value; }

  ModelConfig config_;
  std::vector<Param> params_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct TrainResult {
  std::vector<double> losses;  // total loss per step
  LossParts final;             // deterministic pass over the corpus
  int steps = 0;
};

/// Adam with global-norm clipping; parameters are kept float-representable
/// so a saved checkpoint reproduces the in-memory model exactly.
TrainResult train(Vae &vae, const std::vector<Example> &corpus, const TrainingConfig &config,
                  const std::function<void(int epoch, const LossParts &)> &progress = {});

// Deterministic (z = mu, no dropout) pass in batches.
LossParts evaluate(Vae &vae, const std::vector<Example> &corpus, int batch = 64);

struct Checkpoint {
  Vae vae;
  data::Vocabulary vocab;
  TrainingConfig training;
  nlohmann::json metrics;
  std::string config_hash;
};

std::string config_hash(const ModelConfig &m, const TrainingConfig &t);

void save_checkpoint(const std::filesystem::path &path, const Vae &vae,
                     const data::Vocabulary &vocab, const TrainingConfig &training,
                     const nlohmann::json &metrics);
Checkpoint load_checkpoint(const std::filesystem::path &path);

} // namespace pagforge::gen

#endif // PAGFORGE_GENMODEL_VAE_H_
