//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/pipeline/stages.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <unordered_set>

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/dataset/records.h"
#include "pagforge/dataset/tokenizer.h"
#include "pagforge/dataset/window.h"
#include "pagforge/descriptors/fingerprint.h"
#include "pagforge/eval/metrics.h"
#include "pagforge/genmodel/vae.h"
#include "pagforge/sampler/class_sample.h"
#include "pagforge/sampler/classifier.h"
#include "pagforge/sampler/gmm.h"
#include "pagforge/screening/analysis.h"
#include "pagforge/screening/filters.h"
#include "pagforge/util/clock.h"
#include "pagforge/util/container.h"
#include "pagforge/util/hash.h"
#include "pagforge/util/rng.h"

#ifndef PAGFORGE_DEFAULT_DATA_DIR
#define PAGFORGE_DEFAULT_DATA_DIR "data"
#endif

namespace pagforge::pipeline {

using nlohmann::json;

namespace {

void write_text(const fs::path &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write " + path.string());
  out << text;
  if (!out)
    throw Error("write to " + path.string() + " failed");
}

void write_json(const fs::path &path, const json &j) { write_text(path, j.dump(2) + "\n"); }

json read_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in)
    throw MissingInput("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::string shortest(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_records(const fs::path &path, const std::vector<data::Record> &records) {
  bool labeled = std::any_of(records.begin(), records.end(),
                             [](const data::Record &r) { return r.lumo_ev.has_value(); });
  if (!labeled) {
    data::write_smiles_file(path, records);
    return;
  }
  std::string text = "smiles,id,lumo_ev\n";
  for (const auto &r: records)
    text += r.smiles + "," + r.id + "," + (r.lumo_ev ? shortest(*r.lumo_ev) : std::string()) + "\n";
  write_text(path, text);
}

std::vector<data::Record> read_records(const fs::path &path, json *report = nullptr) {
  auto res = data::ingest(resolve_input(path));
  if (report)
    *report = res.report.to_json();
  return std::move(res.records);
}

std::string records_name(const std::vector<data::Record> &records, const std::string &stem) {
  bool labeled = std::any_of(records.begin(), records.end(),
                             [](const data::Record &r) { return r.lumo_ev.has_value(); });
  return stem + (labeled ? ".csv" : ".smi");
}

std::vector<chem::Molecule> molecules_of(const std::vector<data::Record> &records) {
  std::vector<chem::Molecule> out;
  out.reserve(records.size());
  for (const auto &r: records)
    out.push_back(r.mol);
  return out;
}

std::unordered_set<std::string> canonical_set(const std::vector<fs::path> &files) {
  std::unordered_set<std::string> out;
  for (const auto &f: files) {
    for (const auto &r: read_records(f))
      out.insert(chem::canonical_smiles(r.mol));
  }
  return out;
}

json effective(const std::string &stage, const StageContext &ctx) {
  json cfg = merge_config(default_config(stage), ctx.config_file, "config file");
  return merge_config(cfg, ctx.overrides, "command-line override");
}

template <class T>
T get(const json &cfg, const char *key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception &e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

// Book-keeping shared by all stages.
class StageScope {
public:
  StageScope(std::string name, const StageContext &ctx)
      : name_(std::move(name)), ctx_(ctx), started_(utc_timestamp()) {
    fs::create_directories(ctx.out_dir);
  }
  fs::path out(const std::string &file) {
    fs::path p = ctx_.out_dir / file;
    outputs_.push_back(p);
    return p;
  }
  fs::path in(const fs::path &file) {
    fs::path p = resolve_input(file);
    inputs_.push_back(p);
    return p;
  }
  std::uint64_t seed() const { return stage_seed(ctx_.master_seed, name_); }
  json finish(const json &config, json summary) {
    auto m = Manifest::load(ctx_.out_dir);
    m.record(name_, inputs_, outputs_, config, seed(), started_, utc_timestamp());
    m.save();
    return summary;
  }

private:
  std::string name_;
  const StageContext &ctx_;
  std::string started_;
  std::vector<fs::path> inputs_;
  std::vector<fs::path> outputs_;
};

std::string config_digest(const json &config) { return sha256_hex(config.dump()).substr(0, 16); }

Eigen::MatrixXd latent_matrix(const Container &c) {
  const Tensor &t = c.tensor("mu");
  Eigen::MatrixXd x(t.rows, t.cols);
  for (int i = 0; i < t.rows; ++i) {
    for (int j = 0; j < t.cols; ++j)
      x(i, j) = t.data[static_cast<std::size_t>(i) * t.cols + j];
  }
  return x;
}

} // namespace

int exit_code_for(const std::exception &e) {
  if (dynamic_cast<const NotFoundError *>(&e))
    return kExitMissingInput;
  if (dynamic_cast<const ConfigError *>(&e))
    return kExitConfigError;
  return kExitStageFailure;
}

fs::path data_dir() {
  if (const char *env = std::getenv("PAGFORGE_DATA_DIR"); env && *env)
    return env;
  return PAGFORGE_DEFAULT_DATA_DIR;
}

fs::path resolve_input(const fs::path &path) {
  if (path.empty())
    throw MissingInput("no input path given");
  if (fs::exists(path))
    return path;
  if (path.is_relative()) {
    fs::path alt = data_dir() / path;
    if (fs::exists(alt))
      return alt;
  }
  throw MissingInput("input not found: " + path.string());
}

json merge_config(const json &defaults, const json &overlay, const std::string &where) {
  if (overlay.is_null())
    return defaults;
  if (!overlay.is_object())
    throw ConfigError(where + ": expected a JSON object");
  json out = defaults;
  for (const auto &[key, value]: overlay.items()) {
    if (!defaults.contains(key))
      throw ConfigError(where + ": unknown key '" + key + "'");
    const json &d = defaults.at(key);
    if (d.is_object()) {
      out[key] = merge_config(d, value, where + "." + key);
      continue;
    }
    bool ok = (d.is_number() && value.is_number()) || d.type() == value.type();
    if (d.is_number_integer() && value.is_number_float())
      ok = false;
    if (!ok)
      throw ConfigError(where + ": '" + key + "' expects " + d.type_name() + ", got " +
                        value.type_name());
    out[key] = value;
  }
  return out;
}

json load_config_file(const fs::path &path) {
  std::ifstream in(resolve_input(path));
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::uint64_t stage_seed(std::uint64_t master, const std::string &stage) {
  return derive_seed(master, "stage:" + stage);
}

Manifest Manifest::load(const fs::path &out_dir) {
  Manifest m;
  m.path_ = out_dir / "manifest.json";
  if (fs::exists(m.path_)) {
    std::ifstream in(m.path_);
    try {
      m.doc_ = json::parse(in);
    } catch (const json::exception &) {
      m.doc_ = json::object();
    }
  }
  if (!m.doc_.is_object())
    m.doc_ = json::object();
  if (!m.doc_.contains("stages"))
    m.doc_["stages"] = json::object();
  return m;
}

void Manifest::record(const std::string &stage, const std::vector<fs::path> &inputs,
                      const std::vector<fs::path> &outputs, const json &config,
                      std::uint64_t seed, const std::string &started, const std::string &finished) {
  auto files = [](const std::vector<fs::path> &paths) {
    json arr = json::array();
    for (const auto &p: paths) {
      arr.push_back({ { "path", p.string() },
                      { "sha256", fs::is_regular_file(p) ? sha256_file_hex(p) : std::string() } });
    }
    return arr;
  };
  doc_["stages"][stage] = {
    { "inputs", files(inputs) }, { "outputs", files(outputs) }, { "config", config },
    { "config_hash", config_digest(config) }, { "seed", seed },
    { "started_at", started }, { "finished_at", finished },
  };
  json order = doc_.value("order", json::array());
  order.erase(std::remove(order.begin(), order.end(), json(stage)), order.end());
  order.push_back(stage);
  doc_["order"] = order;
}

void Manifest::save() const { write_json(path_, doc_); }

json default_config(const std::string &stage) {
  if (stage == "ingest")
    return { { "cations_only", false }, { "strict", false } };
  if (stage == "filter")
    return { { "cations_only", true } };
  if (stage == "train-vae") {
    json model = gen::ModelConfig {}.to_json();
    model.erase("vocab");
    json training = gen::TrainingConfig {}.to_json();
    training.erase("seed");
    training.erase("optimizer");
    return { { "model", model }, { "training", training }, { "max_molecules", 0 } };
  }
  if (stage == "encode")
    return json::object();
  if (stage == "fit-gmm") {
    json j = sampler::GmmConfig {}.to_json();
    j.erase("seed");
    return j;
  }
  if (stage == "train-clf") {
    json j = sampler::ClassifierConfig {}.to_json();
    j.erase("seed");
    j["lumo_threshold_ev"] = -5.0;
    return j;
  }
  if (stage == "sample")
    return { { "target_accepted", 100 }, { "max_draws", 100000 }, { "lanes", 8 },
             { "temperature", 0.0 }, { "keep_rejected", true } };
  if (stage == "screen")
    return { { "fluorine_threshold", 0.2 }, { "bin_width", 0.1 }, { "cap", 100 },
             { "fp_radius", desc::kDefaultRadius }, { "fp_width", desc::kDefaultWidth } };
  if (stage == "metrics")
    return { { "fp_radius", desc::kDefaultRadius }, { "fp_width", desc::kDefaultWidth } };
  if (stage == "scaffolds")
    return json::object();
  if (stage == "dice-hist")
    return { { "bin_width", 0.05 }, { "fp_radius", desc::kDefaultRadius },
             { "fp_width", desc::kDefaultWidth } };
  throw InvalidArgument("unknown stage " + stage);
}

// ---------------------------------------------------------------------------

json run_ingest(const IngestInputs &in, const StageContext &ctx) {
  StageScope scope("ingest", ctx);
  json cfg = effective("ingest", ctx);
  data::IngestOptions opt;
  opt.strict = get<bool>(cfg, "strict");
  auto res = data::ingest(scope.in(in.input), opt);
  auto records = std::move(res.records);
  std::size_t before = records.size();
  if (get<bool>(cfg, "cations_only"))
    records = data::keep_cations(records);
  fs::path out = scope.out(records_name(records, "ingested"));
  write_records(out, records);
  json summary = {
    { "stage", "ingest" }, { "config", cfg }, { "ingest", res.report.to_json() },
    { "parsed", before }, { "non_cation_dropped", before - records.size() },
    { "written", records.size() }, { "output", out.filename().string() },
  };
  write_json(scope.out("ingest_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_filter(const FilterInputs &in, const StageContext &ctx) {
  StageScope scope("filter", ctx);
  json cfg = effective("filter", ctx);
  fs::path window_path = in.window.empty() ? fs::path("table1.json") : in.window;
  json window_json = load_config_file(scope.in(window_path));
  data::PropertyWindow window;
  try {
    window = data::PropertyWindow::from_json(window_json);
  } catch (const std::exception &e) {
    throw ConfigError(window_path.string() + ": " + e.what());
  }
  json ingest_report;
  auto records = read_records(scope.in(in.input), &ingest_report);
  std::size_t parsed = records.size();
  if (get<bool>(cfg, "cations_only"))
    records = data::keep_cations(records);
  std::size_t non_cation = parsed - records.size();
  auto res = data::filter_window(records, window, ctx.threads);
  fs::path out = scope.out(records_name(res.kept, "filtered"));
  write_records(out, res.kept);
  json summary = {
    { "stage", "filter" }, { "config", cfg }, { "window", window.to_json() },
    { "ingest", ingest_report }, { "parsed", parsed }, { "non_cation_dropped", non_cation },
    { "window_report", res.report() }, { "kept", res.kept.size() },
    { "output", out.filename().string() },
  };
  write_json(scope.out("filter_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_train_vae(const TrainVaeInputs &in, const StageContext &ctx) {
  StageScope scope("train-vae", ctx);
  json cfg = effective("train-vae", ctx);
  if (in.corpora.empty())
    throw MissingInput("train-vae needs at least one corpus");

  gen::ModelConfig model;
  gen::TrainingConfig training;
  try {
    json m = cfg.at("model");
    m["vocab"] = data::Vocabulary().size();  // replaced once the corpus is tokenized
    model = gen::ModelConfig::from_json(m);
    training = gen::TrainingConfig::from_json(cfg.at("training"));
  } catch (const InvalidArgument &e) {
    throw ConfigError(e.what());
  }
  training.seed = derive_seed(scope.seed(), "train");

  // Union of corpora in file order, deduplicated on canonical SMILES.
  std::vector<chem::Molecule> mols;
  std::vector<std::string> canon;
  std::set<std::string> seen;
  int overlength = 0;
  for (const auto &c: in.corpora) {
    for (auto &r: read_records(scope.in(c))) {
      std::string s = chem::canonical_smiles(r.mol);
      if (!seen.insert(s).second)
        continue;
      if (static_cast<int>(data::lex_smiles(s).size()) + 2 > model.max_len) {
        ++overlength;
        continue;
      }
      mols.push_back(std::move(r.mol));
      canon.push_back(s);
    }
  }
  int cap = get<int>(cfg, "max_molecules");
  if (cap > 0 && static_cast<int>(mols.size()) > cap) {
    // Deterministic subset; the order of later files is kept at the front.
    std::vector<std::size_t> idx(mols.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      idx[i] = i;
    Rng rng(scope.seed(), 1);
    shuffle(idx, rng);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    std::vector<chem::Molecule> m2;
    std::vector<std::string> c2;
    for (auto i: idx) {
      m2.push_back(mols[i]);
      c2.push_back(canon[i]);
    }
    mols.swap(m2);
    canon.swap(c2);
  }
  if (mols.empty())
    throw Error("train-vae: no usable molecules");

  auto vocab = data::Vocabulary::build(canon);
  model.vocab = vocab.size();
  auto examples = gen::make_examples(mols, vocab, model.fp_bits, model.max_len);
  gen::Vae vae(model, derive_seed(scope.seed(), "init"));
  json epochs = json::array();
  auto result = gen::train(vae, examples, training, [&](int epoch, const gen::LossParts &p) {
    json e = p.to_json();
    e["epoch"] = epoch;
    epochs.push_back(e);
  });
  json metrics = result.final.to_json();
  fs::path ckpt = scope.out("vae.ckpt");
  gen::save_checkpoint(ckpt, vae, vocab, training, metrics);
  json summary = {
    { "stage", "train-vae" }, { "config", cfg }, { "model", model.to_json() },
    { "training", training.to_json() }, { "config_hash", gen::config_hash(model, training) },
    { "molecules", mols.size() }, { "overlength_skipped", overlength },
    { "vocabulary", vocab.size() }, { "steps", result.steps }, { "epochs", epochs },
    { "final", metrics },
  };
  write_json(scope.out("train_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_encode(const EncodeInputs &in, const StageContext &ctx) {
  StageScope scope("encode", ctx);
  json cfg = effective("encode", ctx);
  auto ck = gen::load_checkpoint(scope.in(in.checkpoint));
  auto records = read_records(scope.in(in.input));
  std::vector<std::vector<int>> tokens;
  json ids = json::array(), smiles = json::array(), lumo = json::array(), skipped = json::array();
  for (const auto &r: records) {
    std::string s = chem::canonical_smiles(r.mol);
    try {
      tokens.push_back(ck.vocab.encode(s, ck.vae.config().max_len));
    } catch (const InvalidArgument &e) {
      skipped.push_back({ { "id", r.id }, { "reason", e.what() } });
      continue;
    }
    ids.push_back(r.id);
    smiles.push_back(s);
    lumo.push_back(r.lumo_ev ? json(*r.lumo_ev) : json(nullptr));
  }
  if (tokens.empty())
    throw Error("encode: no molecule could be tokenized");
  auto enc = ck.vae.encode(tokens, derive_seed(scope.seed(), "encode"), true);
  const int d = ck.vae.config().latent;
  Tensor mu { "mu", static_cast<int>(enc.size()), d, {} };
  mu.data.reserve(enc.size() * d);
  for (const auto &e: enc) {
    for (int j = 0; j < d; ++j)
      mu.data.push_back(static_cast<float>(e.mu(j)));
  }
  Container c;
  c.header = { { "kind", "latents" }, { "ids", ids }, { "smiles", smiles }, { "lumo_ev", lumo },
               { "checkpoint_hash", ck.config_hash } };
  c.tensors.push_back(std::move(mu));
  fs::path out = scope.out("latents.ctr");
  write_container(out, c);
  json summary = { { "stage", "encode" }, { "config", cfg }, { "encoded", ids.size() },
                   { "skipped", skipped }, { "latent_dim", d } };
  write_json(scope.out("encode_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_fit_gmm(const FitGmmInputs &in, const StageContext &ctx) {
  StageScope scope("fit-gmm", ctx);
  json cfg = effective("fit-gmm", ctx);
  sampler::GmmConfig g;
  g.components = get<int>(cfg, "components");
  g.max_iter = get<int>(cfg, "max_iter");
  g.tol = get<double>(cfg, "tol");
  g.var_floor = get<double>(cfg, "var_floor");
  g.restarts = get<int>(cfg, "restarts");
  g.seed = scope.seed();
  if (g.components < 1 || g.max_iter < 1 || g.restarts < 1 || !(g.var_floor > 0) || !(g.tol > 0))
    throw ConfigError("fit-gmm: components, max_iter, restarts, tol and var_floor must be positive");
  auto x = latent_matrix(read_container(scope.in(in.latents)));
  auto fit = sampler::fit_gmm(x, g);
  write_container(scope.out("gmm.ctr"), fit.model.to_container({ { "config", g.to_json() } }));
  json summary = fit.report(g);
  summary["stage"] = "fit-gmm";
  summary["points"] = x.rows();
  write_json(scope.out("gmm_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_train_clf(const TrainClfInputs &in, const StageContext &ctx) {
  StageScope scope("train-clf", ctx);
  json cfg = effective("train-clf", ctx);
  sampler::ClassifierConfig c;
  c.hidden = get<int>(cfg, "hidden");
  c.epochs = get<int>(cfg, "epochs");
  c.lr = get<double>(cfg, "lr");
  c.weight_decay = get<double>(cfg, "weight_decay");
  c.folds = get<int>(cfg, "folds");
  c.seed = scope.seed();
  double threshold = get<double>(cfg, "lumo_threshold_ev");
  if (c.hidden < 1 || c.epochs < 0 || !(c.lr > 0) || c.weight_decay < 0 || c.folds < 2)
    throw ConfigError("train-clf: hidden, lr positive; folds >= 2; weight_decay >= 0");
  auto container = read_container(scope.in(in.latents));
  auto x = latent_matrix(container);
  std::vector<int> y;
  for (const auto &v: container.header.at("lumo_ev")) {
    if (v.is_null())
      throw Error("train-clf: every encoded molecule needs a lumo_ev label");
    y.push_back(v.get<double>() <= threshold ? 1 : 0);
  }
  auto [model, report] = sampler::train_classifier(x, y, c);
  json header = { { "config", c.to_json() }, { "lumo_threshold_ev", threshold },
                  { "cv", report.to_json() } };
  write_container(scope.out("classifier.ctr"), model.to_container(header));
  write_text(scope.out("confusion.txt"), report.table());
  json summary = { { "stage", "train-clf" }, { "config", cfg }, { "cv", report.to_json() },
                   { "positives", std::count(y.begin(), y.end(), 1) }, { "n", y.size() } };
  write_json(scope.out("cv_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_sample(const SampleInputs &in, const StageContext &ctx) {
  StageScope scope("sample", ctx);
  json cfg = effective("sample", ctx);
  sampler::SampleConfig sc;
  sc.target_accepted = get<long>(cfg, "target_accepted");
  sc.max_draws = get<long>(cfg, "max_draws");
  sc.lanes = get<int>(cfg, "lanes");
  sc.keep_rejected = get<bool>(cfg, "keep_rejected");
  sc.threads = ctx.threads;
  sc.seed = scope.seed();
  double tau = get<double>(cfg, "temperature");
  if (sc.target_accepted < 1 || sc.max_draws < 1 || sc.lanes < 1 || tau < 0)
    throw ConfigError("sample: target_accepted, max_draws, lanes positive; temperature >= 0");

  auto ck = gen::load_checkpoint(scope.in(in.checkpoint));
  auto gmm = sampler::GaussianMixture::from_container(read_container(scope.in(in.gmm)));
  auto clf = sampler::LatentClassifier::from_container(read_container(scope.in(in.classifier)));
  if (gmm.dim() != ck.vae.config().latent || clf.dim() != gmm.dim())
    throw Error("sample: latent dimensions of checkpoint, mixture and classifier differ");

  sampler::AttributeSpec spec;
  spec.attributes.push_back({ "low_lumo", [&clf](const Eigen::VectorXd &z) { return clf.predict(z); }, true });
  const auto &vae = ck.vae;
  const auto &vocab = ck.vocab;
  sampler::Decoder decoder = [&](const Eigen::VectorXd &z, Rng &rng) {
    return vocab.decode(vae.decode(z, tau, &rng));
  };
  sampler::Validator validator = [](const std::string &s) {
    if (s.empty())
      return false;
    try {
      chem::parse_smiles(s);
      return true;
    } catch (const std::exception &) {
      return false;
    }
  };
  auto result = sampler::class_sample(gmm, spec, decoder, validator, sc);

  std::string smi;
  json scores = json::object();
  json trace;
  std::string trace_text;
  int serial = 0;
  for (const auto &d: result.draws) {
    json t = { { "lane", d.lane }, { "index", d.index }, { "probability", d.probability },
               { "uniform", d.uniform }, { "accepted", d.accepted } };
    if (d.accepted) {
      t["decoded"] = d.decoded;
      t["valid"] = d.valid;
    }
    trace_text += t.dump() + "\n";
    if (!d.accepted || !d.valid)
      continue;
    char id[16];
    std::snprintf(id, sizeof id, "G%05d", ++serial);
    std::string canonical = chem::canonical_smiles(chem::parse_smiles(d.decoded));
    smi += canonical + "\t" + id + "\n";
    scores[id] = clf.predict(d.z);
  }
  write_text(scope.out("generated.smi"), smi);
  write_json(scope.out("generated_scores.json"), scores);
  write_text(scope.out("trace.ndjson"), trace_text);
  json summary = result.manifest(sc);
  summary["stage"] = "sample";
  summary["config"] = cfg;
  summary["temperature"] = tau;
  summary["written"] = serial;
  write_json(scope.out("sample_manifest.json"), summary);
  return scope.finish(cfg, summary);
}

json run_screen(const ScreenInputs &in, const StageContext &ctx) {
  StageScope scope("screen", ctx);
  json cfg = effective("screen", ctx);
  screen::FilterConfig fc;
  fc.fluorine_threshold = get<double>(cfg, "fluorine_threshold");
  int radius = get<int>(cfg, "fp_radius"), width = get<int>(cfg, "fp_width");
  screen::BinningConfig bc;
  bc.bin_width = get<double>(cfg, "bin_width");
  bc.cap = get<int>(cfg, "cap");
  bc.seed = derive_seed(scope.seed(), "binning");
  if (radius < 0 || width < 1 || !(bc.bin_width > 0) || bc.cap < 1)
    throw ConfigError("screen: fp_radius >= 0, fp_width, bin_width and cap positive");

  fs::path gen_path = scope.in(in.generated);
  fs::path score_path = in.scores.empty() ? gen_path.parent_path() / "generated_scores.json" : in.scores;
  json scores = read_json(scope.in(score_path));

  // Raw lines, so that invalid SMILES reach the filter and get reported.
  std::vector<screen::Candidate> cands;
  {
    std::ifstream f(gen_path);
    std::string line;
    int n = 0;
    while (std::getline(f, line)) {
      ++n;
      if (line.empty())
        continue;
      auto tab = line.find_first_of(" \t");
      std::string s = line.substr(0, tab);
      std::string id = tab == std::string::npos ? "L" + std::to_string(n) : line.substr(tab + 1);
      cands.push_back({ id, s });
    }
  }
  std::vector<fs::path> training;
  for (const auto &t: in.training)
    training.push_back(scope.in(t));
  auto train = canonical_set(training);
  auto verdicts = screen::chem_filters(cands, train, fc);

  std::map<std::string, int> per_rule;
  json verdict_json = json::array();
  std::vector<int> passed;
  for (std::size_t i = 0; i < verdicts.size(); ++i) {
    verdict_json.push_back(verdicts[i].to_json());
    for (const auto &r: verdicts[i].failed_rules)
      ++per_rule[r];
    if (verdicts[i].passed)
      passed.push_back(static_cast<int>(i));
  }

  auto reference = read_records(scope.in(in.reference));
  std::vector<desc::Fingerprint> ref_fps, pass_fps;
  for (const auto &r: reference)
    ref_fps.push_back(desc::morgan_fingerprint(r.mol, radius, width));
  std::vector<chem::Molecule> pass_mols;
  for (int i: passed) {
    pass_mols.push_back(chem::parse_smiles(verdicts[i].canonical));
    pass_fps.push_back(desc::morgan_fingerprint(pass_mols.back(), radius, width));
  }
  json binning = nullptr;
  json candidates = json::array();
  std::string passed_smi;
  if (!pass_fps.empty()) {
    auto b = screen::similarity_binning(pass_fps, ref_fps, bc);
    binning = b.report();
    for (int k: b.selected) {
      const auto &v = verdicts[passed[k]];
      if (!scores.contains(v.id))
        throw Error("screen: no classifier score for " + v.id);
      candidates.push_back({ { "id", v.id }, { "smiles", v.canonical },
                             { "classifier_score", scores.at(v.id).get<double>() },
                             { "max_ref_similarity", b.max_similarity[k] } });
    }
  }
  for (int i: passed)
    passed_smi += verdicts[i].canonical + "\t" + verdicts[i].id + "\n";
  write_json(scope.out("verdicts.json"), verdict_json);
  write_json(scope.out("candidates.json"), { { "candidates", candidates } });
  write_text(scope.out("passed.smi"), passed_smi);
  json summary = { { "stage", "screen" },           { "config", cfg },
                   { "generated", cands.size() },   { "passed", passed.size() },
                   { "failed_per_rule", per_rule }, { "binning", binning },
                   { "candidates", candidates.size() } };
  write_json(scope.out("screen_report.json"), summary);
  return scope.finish(cfg, summary);
}

json run_metrics(const MetricsInputs &in, const StageContext &ctx) {
  StageScope scope("metrics", ctx);
  json cfg = effective("metrics", ctx);
  eval::MetricConfig mc;
  mc.fp_radius = get<int>(cfg, "fp_radius");
  mc.fp_width = get<int>(cfg, "fp_width");
  mc.threads = ctx.threads;
  auto gen = molecules_of(read_records(scope.in(in.generated)));
  auto ref = molecules_of(read_records(scope.in(in.reference)));
  std::vector<fs::path> training;
  for (const auto &t: in.training)
    training.push_back(scope.in(t));
  auto report = eval::evaluate(gen, ref, canonical_set(training), mc);
  write_text(scope.out("metrics.txt"), report.table("generated"));
  json summary = report.to_json();
  summary["stage"] = "metrics";
  write_json(scope.out("metrics.json"), summary);
  return scope.finish(cfg, summary);
}

json run_scaffolds(const ScaffoldsInputs &in, const StageContext &ctx) {
  StageScope scope("scaffolds", ctx);
  json cfg = effective("scaffolds", ctx);
  auto gen = molecules_of(read_records(scope.in(in.generated)));
  auto ref = molecules_of(read_records(scope.in(in.reference)));
  auto summary_obj = screen::scaffold_summary(gen, ref);
  write_text(scope.out("scaffolds.txt"), summary_obj.table());
  json summary = summary_obj.to_json();
  summary["stage"] = "scaffolds";
  write_json(scope.out("scaffolds.json"), summary);
  return scope.finish(cfg, summary);
}

json run_dice_hist(const DiceHistInputs &in, const StageContext &ctx) {
  StageScope scope("dice-hist", ctx);
  json cfg = effective("dice-hist", ctx);
  double width = get<double>(cfg, "bin_width");
  if (!(width > 0 && width <= 1))
    throw ConfigError("dice-hist: bin_width must lie in (0, 1]");
  std::vector<desc::Fingerprint> fps;
  for (const auto &r: read_records(scope.in(in.input)))
    fps.push_back(desc::morgan_fingerprint(r.mol, get<int>(cfg, "fp_radius"), get<int>(cfg, "fp_width")));
  auto h = screen::dice_histogram(fps, width, ctx.threads);
  write_text(scope.out("dice_hist.csv"), h.csv());
  json summary = { { "stage", "dice-hist" },
                   { "config", cfg },
                   { "molecules", fps.size() },
                   { "pairs", h.total },
                   { "mode_bin", h.mode_bin },
                   { "mode_range", { h.mode_bin * width, (h.mode_bin + 1) * width } } };
  write_json(scope.out("dice_hist.json"), summary);
  return scope.finish(cfg, summary);
}

} // namespace pagforge::pipeline
