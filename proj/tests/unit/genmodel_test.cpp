//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "pagforge/chem/smiles.h"
#include "pagforge/genmodel/vae.h"
#include "pagforge/util/error.h"

namespace {

using namespace pagforge;
using gen::Example;

gen::ModelConfig tiny_config() {
  gen::ModelConfig c;
  c.vocab = 5;  // pad, start, end, two symbols
  c.embed = 3;
  c.hidden = 4;
  c.latent = 2;
  c.aux_hidden = 3;
  c.aux_layers = 4;
  c.fp_bits = 4;
  c.max_len = 8;
  return c;
}

std::vector<Example> tiny_batch() {
  return { { { 1, 3, 4, 3, 2 }, 0.7, 2.5, { 1, 0, 0, 1 } },
           { { 1, 4, 2 }, -1.2, 3.5, { 0, 1, 0, 0 } },
           { { 1, 3, 3, 2 }, 2.0, 1.5, { 1, 1, 0, 0 } } };
}

std::vector<const Example *> ptrs(const std::vector<Example> &v) {
  std::vector<const Example *> out;
  for (const auto &e: v)
    out.push_back(&e);
  return out;
}

// Max relative error of the analytic gradient against central differences,
// per parameter group.
TEST(VaeGradientTest, MatchesFiniteDifferences) {
  gen::Vae vae(tiny_config(), 3);
  auto data = tiny_batch();
  auto batch = ptrs(data);
  gen::LossOptions opt;
  opt.beta = 0.7;
  opt.seed = 99;
  for (bool from_mu: { false, true }) {
    opt.aux_from_mu = from_mu;
    vae.loss(batch, opt, true);
    std::vector<Eigen::MatrixXd> analytic;
    for (const auto &p: vae.params())
      analytic.push_back(p.grad);
    const double h = 1e-6;
    double worst = 0.0;
    for (std::size_t k = 0; k < vae.params().size(); ++k) {
      auto &p = vae.params()[k];
      double group = 0.0;
      for (Eigen::Index i = 0; i < p.value.size(); ++i) {
        double keep = p.value.data()[i];
        p.value.data()[i] = keep + h;
        double up = vae.loss(batch, opt, false).total;
        p.value.data()[i] = keep - h;
        double down = vae.loss(batch, opt, false).total;
        p.value.data()[i] = keep;
        double numeric = (up - down) / (2 * h);
        double a = analytic[k].data()[i];
        double rel = std::abs(a - numeric) / std::max({ std::abs(a), std::abs(numeric), 1e-4 });
        group = std::max(group, rel);
      }
      EXPECT_LT(group, 1e-4) << p.name << (from_mu ? " (aux from mu)" : "");
      worst = std::max(worst, group);
    }
    RecordProperty(from_mu ? "max_rel_error_mu" : "max_rel_error_z", std::to_string(worst));
  }
}

TEST(VaeLossTest, KlVanishesAtPrior) {
  gen::Vae vae(tiny_config(), 1);
  vae.param("mu_W").value.setZero();
  vae.param("mu_b").value.setZero();
  vae.param("lv_W").value.setZero();
  vae.param("lv_b").value.setZero();
  auto data = tiny_batch();
  auto lp = vae.loss(ptrs(data), {}, false);
  EXPECT_EQ(lp.kl, 0.0);
}

TEST(VaeLossTest, PerfectPredictionsGiveZeroReconstruction) {
  // A decoder whose logits depend only on the input token can memorise
  // "start -> C, C -> end".
  gen::Vae vae(tiny_config(), 2);
  for (const char *n: { "dec_W", "dec_Wz", "dec_U", "dec_b", "dec_bh", "dec_zh_W", "dec_zh_b",
                        "out_W", "out_b" })
    vae.param(n).value.setZero();
  auto &emb = vae.param("emb").value;
  emb.setZero();
  emb(0, 1) = 1.0;  // start
  emb(1, 3) = 1.0;  // C
  // Candidate state n = tanh(row of W x); update gate stays at 0.5 from a
  // zero pre-activation, so h = n / 2.
  auto &W = vae.param("dec_W").value;
  W(8, 0) = 50.0;  // unit 0 fires after start
  W(9, 1) = 50.0;  // unit 1 fires after C
  auto &ow = vae.param("out_W").value;
  auto &ob = vae.param("out_b").value;
  ob.setConstant(-1e3);
  ow(3, 0) = 4e3;
  ow(2, 1) = 4e3;
  std::vector<Example> data { { { 1, 3, 2 }, 0.0, 0.0, { 0, 0, 0, 0 } } };
  gen::LossOptions opt;
  opt.sample_z = false;
  auto lp = vae.loss(ptrs(data), opt, false);
  EXPECT_EQ(lp.recon, 0.0);
  EXPECT_EQ(lp.correct, 2);
  EXPECT_EQ(lp.tokens, 2);
}

TEST(VaeInferenceTest, EncodeDecodeContracts) {
  gen::Vae vae(tiny_config(), 4);
  std::vector<std::vector<int>> toks { { 1, 3, 4, 2 }, { 1, 4, 2 } };
  auto a = vae.encode(toks, 7, false);
  auto b = vae.encode(toks, 7, false);
  auto det = vae.encode(toks, 7, true);
  for (std::size_t i = 0; i < toks.size(); ++i) {
    EXPECT_EQ(a[i].z, b[i].z);
    EXPECT_EQ(det[i].z, det[i].mu);
    EXPECT_NE(a[i].z, a[i].mu);
    EXPECT_TRUE((a[i].sigma.array() > 0).all());
  }
  auto greedy = vae.decode(a[0].z);
  EXPECT_EQ(greedy, vae.decode(a[0].z));
  Rng rng(1);
  EXPECT_EQ(vae.decode(a[0].z, 0.0, &rng), greedy);
  EXPECT_EQ(greedy.front(), data::Vocabulary::kStart);
  EXPECT_LE(greedy.size(), static_cast<std::size_t>(tiny_config().max_len + 2));
}

TEST(VaeInferenceTest, AuxHeadsDoNotAffectDecoding) {
  gen::Vae vae(tiny_config(), 5);
  std::vector<std::vector<int>> toks { { 1, 3, 4, 3, 2 } };
  auto z = vae.encode(toks, 0, true)[0].mu;
  auto before = vae.decode(z);
  for (auto &p: vae.params()) {
    if (p.name.rfind("aux_", 0) == 0)
      p.value.setZero();
  }
  EXPECT_EQ(vae.decode(z), before);
  EXPECT_EQ(vae.encode(toks, 0, true)[0].mu, z);
}

TEST(VaeTrainTest, DeterministicAndZeroEpochs) {
  gen::TrainingConfig tc;
  tc.epochs = 3;
  tc.batch = 2;
  tc.seed = 11;
  tc.lr = 1e-2;
  auto data = tiny_batch();
  gen::Vae a(tiny_config(), 8), b(tiny_config(), 8);
  auto ra = gen::train(a, data, tc);
  auto rb = gen::train(b, data, tc);
  ASSERT_EQ(ra.losses.size(), 6U);
  EXPECT_EQ(ra.losses, rb.losses);

  gen::Vae init(tiny_config(), 8), fresh(tiny_config(), 8);
  tc.epochs = 0;
  gen::train(init, data, tc);
  for (std::size_t k = 0; k < init.params().size(); ++k)
    EXPECT_EQ(init.params()[k].value, fresh.params()[k].value);
  EXPECT_THROW(gen::train(init, {}, tc), InvalidArgument);
}

TEST(VaeCheckpointTest, RoundTripIsBitwise) {
  gen::TrainingConfig tc;
  tc.epochs = 2;
  tc.batch = 2;
  tc.lr = 5e-3;
  auto data = tiny_batch();
  gen::Vae vae(tiny_config(), 9);
  gen::train(vae, data, tc);
  auto vocab = data::Vocabulary::build({ "CO" });
  ASSERT_EQ(vocab.size(), 5);
  auto path = std::filesystem::temp_directory_path() / "pagforge_vae_test.ckpt";
  gen::save_checkpoint(path, vae, vocab, tc, { { "note", "test" } });
  auto ck = gen::load_checkpoint(path);
  EXPECT_EQ(ck.vocab, vocab);
  EXPECT_EQ(ck.config_hash, gen::config_hash(vae.config(), tc));
  gen::LossOptions opt;
  opt.seed = 5;
  auto l1 = vae.loss(ptrs(data), opt, false);
  auto l2 = ck.vae.loss(ptrs(data), opt, false);
  EXPECT_EQ(l1.total, l2.total);
  std::filesystem::remove(path);
  EXPECT_THROW(gen::load_checkpoint(path), NotFoundError);
}

} // namespace
