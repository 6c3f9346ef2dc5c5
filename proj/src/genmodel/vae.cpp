//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/genmodel/vae.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pagforge/chem/canonical.h"
#include "pagforge/descriptors/fingerprint.h"
#include "pagforge/descriptors/properties.h"
#include "pagforge/util/error.h"

namespace pagforge::gen {
namespace {

using Row = Eigen::Array<double, 1, Eigen::Dynamic>;

Mat sigmoid(const Mat &x) { return (1.0 / (1.0 + (-x.array()).exp())).matrix(); }

struct GruCache {
  std::vector<Mat> hprev, r, u, n, ghn;
};

// gx: 3H x (T*B) input projections with bias; mask: T x B. Padded steps
// carry the previous state through unchanged.
Mat gru_forward(const Mat &U, const Mat &bh, const Mat &gx, const Mat &mask, const Mat &h0,
                bool reverse, GruCache &c, Mat *hs) {
  const Eigen::Index H = U.cols(), B = h0.cols(), T = mask.rows();
  for (auto *v: { &c.hprev, &c.r, &c.u, &c.n, &c.ghn })
    v->assign(T, Mat());
  Mat h = h0;
  for (Eigen::Index k = 0; k < T; ++k) {
    Eigen::Index t = reverse ? T - 1 - k : k;
    auto gxt = gx.middleCols(t * B, B);
    Mat gh = U * h;
    gh.colwise() += bh.col(0);
    Mat r = sigmoid(gxt.topRows(H) + gh.topRows(H));
    Mat u = sigmoid(gxt.middleRows(H, H) + gh.middleRows(H, H));
    Mat ghn = gh.bottomRows(H);
    Mat n = (gxt.bottomRows(H).array() + r.array() * ghn.array()).tanh().matrix();
    Mat hnew = ((1.0 - u.array()) * n.array() + u.array() * h.array()).matrix();
    c.hprev[t] = h;
    c.r[t] = std::move(r);
    c.u[t] = std::move(u);
    c.n[t] = std::move(n);
    c.ghn[t] = std::move(ghn);
    Row m = mask.row(t).array();
    h = (h.array() + (hnew - h).array().rowwise() * m).matrix();
    if (hs)
      hs->middleCols(t * B, B) = h;
  }
  return h;
}

// Backward through gru_forward. Fills dgx, accumulates gU and gbh, and
// returns the gradient with respect to h0.
Mat gru_backward(const Mat &U, const GruCache &c, const Mat &mask, bool reverse, const Mat *dhs,
                 const Mat &dh_final, Mat &dgx, Mat &gU, Mat &gbh) {
  const Eigen::Index H = U.cols(), B = dh_final.cols(), T = mask.rows();
  dgx.setZero(3 * H, T * B);
  Mat dh = dh_final;
  Mat dgh(3 * H, B);
  for (Eigen::Index k = T - 1; k >= 0; --k) {
    Eigen::Index t = reverse ? T - 1 - k : k;
    if (dhs)
      dh += dhs->middleCols(t * B, B);
    Row m = mask.row(t).array();
    Mat dhnew = (dh.array().rowwise() * m).matrix();
    Mat dprev = (dh.array().rowwise() * (1.0 - m)).matrix();
    const Mat &u = c.u[t], &n = c.n[t], &r = c.r[t], &hp = c.hprev[t], &ghn = c.ghn[t];
    Mat dn = (dhnew.array() * (1.0 - u.array())).matrix();
    Mat du = (dhnew.array() * (hp.array() - n.array())).matrix();
    dprev.array() += dhnew.array() * u.array();
    Mat dan = (dn.array() * (1.0 - n.array().square())).matrix();
    Mat dar = (dan.array() * ghn.array() * r.array() * (1.0 - r.array())).matrix();
    Mat dau = (du.array() * u.array() * (1.0 - u.array())).matrix();
    auto g = dgx.middleCols(t * B, B);
    g.topRows(H) = dar;
    g.middleRows(H, H) = dau;
    g.bottomRows(H) = dan;
    dgh.topRows(H) = dar;
    dgh.middleRows(H, H) = dau;
    dgh.bottomRows(H) = (dan.array() * r.array()).matrix();
    gU.noalias() += dgh * hp.transpose();
    gbh += dgh.rowwise().sum();
    dprev.noalias() += U.transpose() * dgh;
    dh = std::move(dprev);
  }
  return dh;
}

struct MlpCache {
  std::vector<Mat> in;    // input to each layer
  std::vector<Mat> keep;  // activation * dropout scale, per hidden layer
};

std::string layer_name(const std::string &head, int l, const char *what) {
  return "aux_" + head + "_" + std::to_string(l) + "_" + what;
}

const char *const kHeads[] = { "logp", "sa", "fp" };

Mat embed(const Mat &emb, const Eigen::MatrixXi &tok) {
  const Eigen::Index T = tok.rows(), B = tok.cols();
  Mat x(emb.rows(), T * B);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index b = 0; b < B; ++b)
      x.col(t * B + b) = emb.col(tok(t, b));
  }
  return x;
}

void scatter_embed(Mat &g_emb, const Mat &dx, const Eigen::MatrixXi &tok) {
  const Eigen::Index T = tok.rows(), B = tok.cols();
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index b = 0; b < B; ++b)
      g_emb.col(tok(t, b)) += dx.col(t * B + b);
  }
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

// ---------------------------------------------------------------------------

nlohmann::json ModelConfig::to_json() const {
  return { { "vocab", vocab },           { "embed", embed },
           { "hidden", hidden },         { "latent", latent },
           { "aux_hidden", aux_hidden }, { "aux_layers", aux_layers },
           { "dropout", dropout },       { "fp_bits", fp_bits },
           { "max_len", max_len } };
}

ModelConfig ModelConfig::from_json(const nlohmann::json &j) {
  ModelConfig c;
  c.vocab = j.at("vocab");
  c.embed = j.value("embed", c.embed);
  c.hidden = j.value("hidden", c.hidden);
  c.latent = j.value("latent", c.latent);
  c.aux_hidden = j.value("aux_hidden", c.aux_hidden);
  c.aux_layers = j.value("aux_layers", c.aux_layers);
  c.dropout = j.value("dropout", c.dropout);
  c.fp_bits = j.value("fp_bits", c.fp_bits);
  c.max_len = j.value("max_len", c.max_len);
  return c;
}

nlohmann::json TrainingConfig::to_json() const {
  return { { "optimizer", "adam" },     { "lr", lr },
           { "epochs", epochs },        { "batch", batch },
           { "kl_anneal", kl_anneal },  { "beta_max", beta_max },
           { "aux_weight", aux_weight }, { "logp_ratio", logp_ratio },
           { "clip", clip },            { "aux_from_mu", aux_from_mu },
           { "seed", seed } };
}

TrainingConfig TrainingConfig::from_json(const nlohmann::json &j) {
  TrainingConfig c;
  c.lr = j.value("lr", c.lr);
  c.epochs = j.value("epochs", c.epochs);
  c.batch = j.value("batch", c.batch);
  c.kl_anneal = j.value("kl_anneal", c.kl_anneal);
  c.beta_max = j.value("beta_max", c.beta_max);
  c.aux_weight = j.value("aux_weight", c.aux_weight);
  c.logp_ratio = j.value("logp_ratio", c.logp_ratio);
  c.clip = j.value("clip", c.clip);
  c.aux_from_mu = j.value("aux_from_mu", c.aux_from_mu);
  c.seed = j.value("seed", c.seed);
  if (c.lr <= 0 || c.epochs < 0 || c.batch <= 0 || c.aux_weight < 0 || c.logp_ratio < 0 ||
      c.beta_max < 0 || c.clip <= 0)
    throw InvalidArgument("training config: rates and sizes must be positive, weights >= 0");
  return c;
}

nlohmann::json LossParts::to_json() const {
  return { { "recon", recon }, { "kl", kl },       { "logp", logp },
           { "sa", sa },       { "fp", fp },       { "total", total },
           { "tokens", tokens }, { "token_accuracy", accuracy() } };
}

std::vector<Example> make_examples(const std::vector<chem::Molecule> &mols,
                                   const data::Vocabulary &vocab, int fp_bits, int max_len) {
  std::vector<Example> out;
  out.reserve(mols.size());
  for (const auto &m: mols) {
    Example e;
    e.tokens = vocab.encode(chem::canonical_smiles(m), max_len);
    auto d = desc::compute_descriptors(m);
    e.logp = d.logp;
    e.sa = d.sa;
    auto fp = desc::morgan_fingerprint(m, desc::kDefaultRadius, fp_bits);
    e.fp.assign(fp_bits, 0.0);
    for (int b: fp.on_bits())
      e.fp[b] = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------

struct Vae::EncoderCache {
  Eigen::MatrixXi tok;  // T x B
  Mat mask;             // T x B
  Mat x;                // E x T*B
  GruCache fwd, bwd;
  Mat hcat;             // 2H x B
  Mat mu, lv;           // D x B
};

Vae::Vae(const ModelConfig &config, std::uint64_t seed) : config_(config) {
  const auto &c = config_;
  if (c.vocab <= 3 || c.embed <= 0 || c.hidden <= 0 || c.latent <= 0 || c.aux_hidden <= 0 ||
      c.aux_layers < 1 || c.fp_bits <= 0 || c.dropout < 0 || c.dropout >= 1)
    throw InvalidArgument("model config: sizes must be positive, dropout in [0, 1)");
  Rng rng(seed, 0x5ae);
  const int E = c.embed, H = c.hidden, D = c.latent, V = c.vocab;
  double sh = 1.0 / std::sqrt(static_cast<double>(H));
  add("emb", E, V, 0.5, rng);
  for (const char *dir: { "enc_f", "enc_b" }) {
    std::string p(dir);
    add(p + "_W", 3 * H, E, sh, rng);
    add(p + "_U", 3 * H, H, sh, rng);
    add(p + "_b", 3 * H, 1, sh, rng);
    add(p + "_bh", 3 * H, 1, sh, rng);
  }
  double s2h = 1.0 / std::sqrt(2.0 * H);
  add("mu_W", D, 2 * H, s2h, rng);
  add("mu_b", D, 1, s2h, rng);
  add("lv_W", D, 2 * H, s2h, rng);
  add("lv_b", D, 1, s2h, rng);
  double sd = 1.0 / std::sqrt(static_cast<double>(D));
  add("dec_zh_W", H, D, sd, rng);
  add("dec_zh_b", H, 1, sd, rng);
  add("dec_W", 3 * H, E, sh, rng);
  add("dec_Wz", 3 * H, D, sh, rng);
  add("dec_U", 3 * H, H, sh, rng);
  add("dec_b", 3 * H, 1, sh, rng);
  add("dec_bh", 3 * H, 1, sh, rng);
  add("out_W", V, H, sh, rng);
  add("out_b", V, 1, sh, rng);
  for (const char *head: kHeads) {
    int in = D;
    for (int l = 0; l < c.aux_layers; ++l) {
      bool last = l + 1 == c.aux_layers;
      int out = last ? (std::string(head) == "fp" ? c.fp_bits : 1) : c.aux_hidden;
      double s = 1.0 / std::sqrt(static_cast<double>(in));
      add(layer_name(head, l, "W"), out, in, s, rng);
      add(layer_name(head, l, "b"), out, 1, s, rng);
      in = out;
    }
  }
  round_to_float();
}

void Vae::add(const std::string &name, int rows, int cols, double scale, Rng &rng) {
  Param p { name, Mat(rows, cols), Mat::Zero(rows, cols) };
  for (Eigen::Index i = 0; i < p.value.size(); ++i)
    p.value.data()[i] = (2.0 * rng.uniform() - 1.0) * scale;
  index_[name] = params_.size();
  params_.push_back(std::move(p));
}

Param &Vae::param(const std::string &name) {
  auto it = index_.find(name);
  if (it == index_.end())
    throw NotFoundError("no parameter " + name);
  return params_[it->second];
}

const Param &Vae::param(const std::string &name) const {
  return const_cast<Vae *>(this)->param(name);
}

void Vae::round_to_float() {
  for (auto &p: params_) {
    for (Eigen::Index i = 0; i < p.value.size(); ++i)
      p.value.data()[i] = static_cast<double>(static_cast<float>(p.value.data()[i]));
  }
}

void Vae::encoder_forward(const std::vector<const std::vector<int> *> &seqs,
                          EncoderCache &c) const {
  const Eigen::Index B = static_cast<Eigen::Index>(seqs.size());
  const int H = config_.hidden;
  Eigen::Index T = 1;
  for (const auto *s: seqs) {
    if (s->size() < 2 || s->front() != data::Vocabulary::kStart)
      throw InvalidArgument("token sequence must start with the start token");
    T = std::max<Eigen::Index>(T, static_cast<Eigen::Index>(s->size()) - 1);
  }
  c.tok.setConstant(T, B, data::Vocabulary::kPad);
  c.mask.setZero(T, B);
  for (Eigen::Index b = 0; b < B; ++b) {
    const auto &s = *seqs[b];
    for (std::size_t t = 1; t < s.size(); ++t) {
      if (s[t] < 0 || s[t] >= config_.vocab)
        throw InvalidArgument("token id out of range");
      c.tok(static_cast<Eigen::Index>(t) - 1, b) = s[t];
      c.mask(static_cast<Eigen::Index>(t) - 1, b) = 1.0;
    }
  }
  c.x = embed(w("emb"), c.tok);
  Mat h0 = Mat::Zero(H, B);
  Mat gxf = w("enc_f_W") * c.x;
  gxf.colwise() += w("enc_f_b").col(0);
  Mat hf = gru_forward(w("enc_f_U"), w("enc_f_bh"), gxf, c.mask, h0, false, c.fwd, nullptr);
  Mat gxb = w("enc_b_W") * c.x;
  gxb.colwise() += w("enc_b_b").col(0);
  Mat hb = gru_forward(w("enc_b_U"), w("enc_b_bh"), gxb, c.mask, h0, true, c.bwd, nullptr);
  c.hcat.resize(2 * H, B);
  c.hcat.topRows(H) = hf;
  c.hcat.bottomRows(H) = hb;
  c.mu = w("mu_W") * c.hcat;
  c.mu.colwise() += w("mu_b").col(0);
  c.lv = w("lv_W") * c.hcat;
  c.lv.colwise() += w("lv_b").col(0);
}

LossParts Vae::loss(const std::vector<const Example *> &batch, const LossOptions &opt,
                    bool want_grad) {
  if (batch.empty())
    throw InvalidArgument("empty batch");
  const auto &cf = config_;
  const Eigen::Index B = static_cast<Eigen::Index>(batch.size());
  const int H = cf.hidden, D = cf.latent, V = cf.vocab;
  const double inv_b = 1.0 / static_cast<double>(B);

  std::vector<const std::vector<int> *> seqs;
  for (const auto *e: batch)
    seqs.push_back(&e->tokens);
  EncoderCache ec;
  encoder_forward(seqs, ec);

  Mat eta = Mat::Zero(D, B);
  if (opt.sample_z) {
    Rng rng(opt.seed, 0);
    for (Eigen::Index b = 0; b < B; ++b) {
      for (int d = 0; d < D; ++d)
        eta(d, b) = rng.normal();
    }
  }
  Mat sigma = (0.5 * ec.lv.array()).exp().matrix();
  Mat z = (ec.mu.array() + sigma.array() * eta.array()).matrix();

  // Decoder, teacher forced.
  const Eigen::Index T = ec.tok.rows();
  Eigen::MatrixXi din(T, B), dtgt(T, B);
  din.setConstant(data::Vocabulary::kPad);
  dtgt.setConstant(data::Vocabulary::kPad);
  for (Eigen::Index b = 0; b < B; ++b) {
    const auto &s = batch[b]->tokens;
    for (std::size_t t = 0; t + 1 < s.size(); ++t) {
      din(static_cast<Eigen::Index>(t), b) = s[t];
      dtgt(static_cast<Eigen::Index>(t), b) = s[t + 1];
    }
  }
  const Mat &dmask = ec.mask;
  Mat xd = embed(w("emb"), din);
  Mat gz = w("dec_Wz") * z;
  Mat gx = w("dec_W") * xd;
  gx.colwise() += w("dec_b").col(0);
  for (Eigen::Index t = 0; t < T; ++t)
    gx.middleCols(t * B, B) += gz;
  Mat h0 = w("dec_zh_W") * z;
  h0.colwise() += w("dec_zh_b").col(0);
  h0 = h0.array().tanh().matrix();
  GruCache dc;
  Mat hs(H, T * B);
  gru_forward(w("dec_U"), w("dec_bh"), gx, dmask, h0, false, dc, &hs);
  Mat logits = w("out_W") * hs;
  logits.colwise() += w("out_b").col(0);

  LossParts lp;
  Mat dlogits = Mat::Zero(V, T * B);
  for (Eigen::Index t = 0; t < T; ++t) {
    for (Eigen::Index b = 0; b < B; ++b) {
      if (dmask(t, b) == 0.0)
        continue;
      Eigen::Index col = t * B + b;
      auto l = logits.col(col);
      Eigen::Index arg;
      double mx = l.maxCoeff(&arg);
      Vec p = (l.array() - mx).exp().matrix();
      double sum = p.sum();
      p /= sum;
      int target = dtgt(t, b);
      lp.recon += -(l(target) - mx - std::log(sum));
      ++lp.tokens;
      if (arg == target)
        ++lp.correct;
      if (want_grad) {
        p(target) -= 1.0;
        dlogits.col(col) = p * inv_b;
      }
    }
  }
  lp.recon *= inv_b;
  lp.kl = 0.5 * (ec.mu.array().square() + ec.lv.array().exp() - 1.0 - ec.lv.array()).sum() *
          inv_b;

  // Auxiliary heads.
  const Mat &aux_in = opt.aux_from_mu ? ec.mu : z;
  const double wt[3] = { opt.aux_weight * opt.logp_ratio, opt.aux_weight, opt.aux_weight };
  Mat d_aux = Mat::Zero(D, B);
  struct HeadState {
    MlpCache cache;
    Mat dout;
  } heads[3];
  for (int h = 0; h < 3; ++h) {
    const std::string head = kHeads[h];
    auto &hsx = heads[h];
    Rng drop(opt.seed, 100 + h);
    Mat a = aux_in;
    for (int l = 0; l < cf.aux_layers; ++l) {
      hsx.cache.in.push_back(a);
      Mat pre = w(layer_name(head, l, "W")) * a;
      pre.colwise() += w(layer_name(head, l, "b")).col(0);
      if (l + 1 == cf.aux_layers) {
        a = std::move(pre);
        break;
      }
      Mat keep = (pre.array() > 0.0).cast<double>().matrix();
      if (opt.dropout && cf.dropout > 0.0) {
        double scale = 1.0 / (1.0 - cf.dropout);
        for (Eigen::Index i = 0; i < keep.size(); ++i)
          keep.data()[i] *= drop.uniform() < cf.dropout ? 0.0 : scale;
      }
      a = (pre.array() * keep.array()).matrix();
      hsx.cache.keep.push_back(std::move(keep));
    }
    hsx.dout = Mat::Zero(a.rows(), B);
    if (h < 2) {
      double sum = 0.0;
      for (Eigen::Index b = 0; b < B; ++b) {
        double y = h == 0 ? batch[b]->logp : batch[b]->sa;
        double diff = a(0, b) - y;
        sum += std::abs(diff);
        hsx.dout(0, b) = wt[h] * ((diff > 0) - (diff < 0)) * inv_b;
      }
      (h == 0 ? lp.logp : lp.sa) = sum * inv_b;
    } else {
      const double norm = 1.0 / (static_cast<double>(a.rows()) * B);
      double sum = 0.0;
      for (Eigen::Index b = 0; b < B; ++b) {
        const auto &y = batch[b]->fp;
        if (static_cast<Eigen::Index>(y.size()) != a.rows())
          throw InvalidArgument("fingerprint target width does not match the model");
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
          double x = a(i, b);
          double softplus = x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
          sum += softplus - y[i] * x;
          hsx.dout(i, b) = wt[h] * (1.0 / (1.0 + std::exp(-x)) - y[i]) * norm;
        }
      }
      lp.fp = sum * norm;
    }
  }
  lp.total = lp.recon + opt.beta * lp.kl + wt[0] * lp.logp + wt[1] * lp.sa + wt[2] * lp.fp;
  if (!finite(lp.total)) {
    std::ostringstream os;
    os << "non-finite loss: recon=" << lp.recon << " kl=" << lp.kl << " logp=" << lp.logp
       << " sa=" << lp.sa << " fp=" << lp.fp << " max|mu|=" << ec.mu.cwiseAbs().maxCoeff()
       << " max logvar=" << ec.lv.maxCoeff();
    throw NumericError(os.str());
  }
  if (!want_grad)
    return lp;

  for (auto &p: params_)
    p.grad.setZero();
  auto g = [&](const std::string &name) -> Mat & { return param(name).grad; };

  // Output layer and decoder.
  g("out_W").noalias() += dlogits * hs.transpose();
  g("out_b") += dlogits.rowwise().sum();
  Mat dhs = w("out_W").transpose() * dlogits;
  Mat dgx;
  Mat dh0 = gru_backward(w("dec_U"), dc, dmask, false, &dhs, Mat::Zero(H, B), dgx, g("dec_U"),
                         g("dec_bh"));
  g("dec_W").noalias() += dgx * xd.transpose();
  g("dec_b") += dgx.rowwise().sum();
  scatter_embed(g("emb"), w("dec_W").transpose() * dgx, din);
  Mat dgz = Mat::Zero(3 * H, B);
  for (Eigen::Index t = 0; t < T; ++t)
    dgz += dgx.middleCols(t * B, B);
  g("dec_Wz").noalias() += dgz * z.transpose();
  Mat dz = w("dec_Wz").transpose() * dgz;
  Mat dpre = (dh0.array() * (1.0 - h0.array().square())).matrix();
  g("dec_zh_W").noalias() += dpre * z.transpose();
  g("dec_zh_b") += dpre.rowwise().sum();
  dz.noalias() += w("dec_zh_W").transpose() * dpre;

  // Auxiliary heads.
  for (int h = 0; h < 3; ++h) {
    const std::string head = kHeads[h];
    auto &hsx = heads[h];
    Mat d = std::move(hsx.dout);
    for (int l = cf.aux_layers - 1; l >= 0; --l) {
      if (l + 1 < cf.aux_layers)
        d.array() *= hsx.cache.keep[l].array();
      g(layer_name(head, l, "W")).noalias() += d * hsx.cache.in[l].transpose();
      g(layer_name(head, l, "b")) += d.rowwise().sum();
      d = w(layer_name(head, l, "W")).transpose() * d;
    }
    d_aux += d;
  }

  Mat dmu = opt.beta * inv_b * ec.mu;
  Mat dlv = (opt.beta * inv_b * 0.5 * (ec.lv.array().exp() - 1.0)).matrix();
  if (opt.aux_from_mu)
    dmu += d_aux;
  else
    dz += d_aux;
  dmu += dz;
  dlv.array() += dz.array() * eta.array() * 0.5 * sigma.array();

  // Encoder.
  g("mu_W").noalias() += dmu * ec.hcat.transpose();
  g("mu_b") += dmu.rowwise().sum();
  g("lv_W").noalias() += dlv * ec.hcat.transpose();
  g("lv_b") += dlv.rowwise().sum();
  Mat dhcat = w("mu_W").transpose() * dmu + w("lv_W").transpose() * dlv;
  Mat dx = Mat::Zero(cf.embed, ec.x.cols());
  for (const char *dir: { "enc_f", "enc_b" }) {
    std::string p(dir);
    bool rev = p == "enc_b";
    Mat dgxe;
    gru_backward(w(p + "_U"), rev ? ec.bwd : ec.fwd, ec.mask, rev, nullptr,
                 rev ? Mat(dhcat.bottomRows(H)) : Mat(dhcat.topRows(H)), dgxe, g(p + "_U"),
                 g(p + "_bh"));
    g(p + "_W").noalias() += dgxe * ec.x.transpose();
    g(p + "_b") += dgxe.rowwise().sum();
    dx.noalias() += w(p + "_W").transpose() * dgxe;
  }
  scatter_embed(g("emb"), dx, ec.tok);
  return lp;
}

std::vector<Encoding> Vae::encode(const std::vector<std::vector<int>> &tokens,
                                  std::uint64_t seed, bool deterministic) const {
  std::vector<Encoding> out;
  if (tokens.empty())
    return out;
  std::vector<const std::vector<int> *> seqs;
  for (const auto &t: tokens)
    seqs.push_back(&t);
  EncoderCache ec;
  encoder_forward(seqs, ec);
  Rng rng(seed, 0);
  for (std::size_t b = 0; b < tokens.size(); ++b) {
    Encoding e;
    e.mu = ec.mu.col(static_cast<Eigen::Index>(b));
    e.sigma = (0.5 * ec.lv.col(static_cast<Eigen::Index>(b)).array()).exp().matrix();
    e.z = e.mu;
    if (!deterministic) {
      for (Eigen::Index d = 0; d < e.z.size(); ++d)
        e.z(d) += e.sigma(d) * rng.normal();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<int> Vae::decode(const Vec &z, double tau, Rng *rng) const {
  if (z.size() != config_.latent)
    throw InvalidArgument("latent dimension mismatch");
  if (tau > 0.0 && rng == nullptr)
    throw InvalidArgument("temperature sampling needs a random stream");
  const int H = config_.hidden;
  Vec gz = w("dec_Wz") * z + w("dec_b").col(0);
  Vec h = (w("dec_zh_W") * z + w("dec_zh_b").col(0)).array().tanh().matrix();
  const Mat &W = w("dec_W"), &U = w("dec_U"), &emb = w("emb"), &ow = w("out_W");
  const Vec bh = w("dec_bh").col(0), ob = w("out_b").col(0);
  std::vector<int> out { data::Vocabulary::kStart };
  int tok = data::Vocabulary::kStart;
  std::vector<double> probs(config_.vocab);
  for (int step = 0; step <= config_.max_len; ++step) {
    Vec gx = W * emb.col(tok) + gz;
    Vec gh = U * h + bh;
    Vec r = sigmoid(gx.head(H) + gh.head(H));
    Vec u = sigmoid(gx.segment(H, H) + gh.segment(H, H));
    Vec n = (gx.tail(H).array() + r.array() * gh.tail(H).array()).tanh().matrix();
    h = ((1.0 - u.array()) * n.array() + u.array() * h.array()).matrix();
    Vec logits = ow * h + ob;
    // Pad and start are never emitted.
    logits(data::Vocabulary::kPad) = -1e300;
    logits(data::Vocabulary::kStart) = -1e300;
    if (tau <= 0.0) {
      Eigen::Index arg;
      logits.maxCoeff(&arg);
      tok = static_cast<int>(arg);
    } else {
      double mx = logits.maxCoeff();
      for (int v = 0; v < config_.vocab; ++v)
        probs[v] = std::exp((logits(v) - mx) / tau);
      tok = static_cast<int>(rng->categorical(probs));
    }
    out.push_back(tok);
    if (tok == data::Vocabulary::kEnd)
      break;
  }
  return out;
}

std::vector<Tensor> Vae::tensors() const {
  std::vector<Tensor> out;
  for (const auto &p: params_) {
    Tensor t { p.name, static_cast<int>(p.value.rows()), static_cast<int>(p.value.cols()), {} };
    t.data.reserve(p.value.size());
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index c = 0; c < p.value.cols(); ++c)
        t.data.push_back(static_cast<float>(p.value(r, c)));
    }
    out.push_back(std::move(t));
  }
  return out;
}

void Vae::load_tensors(const Container &c) {
  for (auto &p: params_) {
    const Tensor &t = c.tensor(p.name);
    if (t.rows != p.value.rows() || t.cols != p.value.cols())
      throw InvalidArgument("tensor '" + p.name + "' has the wrong shape");
    for (Eigen::Index r = 0; r < p.value.rows(); ++r) {
      for (Eigen::Index col = 0; col < p.value.cols(); ++col)
        p.value(r, col) = t.data[static_cast<std::size_t>(r * p.value.cols() + col)];
    }
  }
}

} // namespace pagforge::gen
