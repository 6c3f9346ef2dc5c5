//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pagforge/adjudication/service.h"
#include "pagforge/pipeline/stages.h"

namespace fs = std::filesystem;
namespace pl = pagforge::pipeline;
using nlohmann::json;

namespace {

struct Common {
  std::string out = ".";
  std::uint64_t seed = 1;
  int threads = 0;
  std::string config;
  std::vector<std::string> set;  // key.path=value overrides
};

void add_common(CLI::App *cmd, Common &c) {
  cmd->add_option("-o,--out", c.out, "Output directory (manifest.json lives here)")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Master seed; per-stage seeds derive from it")->capture_default_str();
  cmd->add_option("--threads", c.threads, "Worker threads, 0 for all cores")->capture_default_str();
  cmd->add_option("-c,--config", c.config, "Stage config file (JSON)");
  cmd->add_option("--set", c.set, "Config override KEY=VALUE, dotted keys for nesting, value parsed as JSON");
}

json parse_overrides(const std::vector<std::string> &items) {
  json out = json::object();
  for (const auto &item: items) {
    auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw pl::ConfigError("--set expects KEY=VALUE, got '" + item + "'");
    std::string key = item.substr(0, eq), raw = item.substr(eq + 1);
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::exception &) {
      value = raw;
    }
    json *node = &out;
    std::size_t start = 0;
    while (true) {
      auto dot = key.find('.', start);
      std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (dot == std::string::npos) {
        (*node)[part] = value;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
  return out;
}

pl::StageContext context(const Common &c, json flags) {
  pl::StageContext ctx;
  ctx.out_dir = c.out;
  ctx.master_seed = c.seed;
  ctx.threads = c.threads;
  if (!c.config.empty())
    ctx.config_file = pl::load_config_file(c.config);
  ctx.overrides = parse_overrides(c.set);
  ctx.overrides.merge_patch(flags);
  return ctx;
}

template <class T>
void put(json &j, const char *key, const std::optional<T> &v) {
  if (v)
    j[key] = *v;
}

std::vector<fs::path> paths(const std::vector<std::string> &v) { return { v.begin(), v.end() }; }

} // namespace

int main(int argc, char **argv) {
  CLI::App app { "PagForge: conditional generation and screening of sulfonium cations" };
  app.require_subcommand(1);
  app.set_version_flag("--version", "pagforge 1.0.0");
  app.footer("Exit codes: 0 ok, 1 stage failure, 2 missing input, 3 config error.\n"
             "Relative inputs not found in the working directory are looked up under\n"
             "PAGFORGE_DATA_DIR (default: the bundled data directory).");

  Common common;
  std::function<json()> action;

  // ingest
  auto *ingest = app.add_subcommand("ingest", "Parse a SMILES or smiles,id,lumo_ev file");
  std::string ingest_in;
  bool ingest_cations = false, ingest_strict = false;
  ingest->add_option("input", ingest_in, "Input file")->required();
  ingest->add_flag("--cations-only", ingest_cations, "Keep single-component monocations");
  ingest->add_flag("--strict", ingest_strict, "Fail on the first malformed line");
  add_common(ingest, common);
  ingest->callback([&] {
    action = [&] {
      json f = json::object();
      if (ingest_cations)
        f["cations_only"] = true;
      if (ingest_strict)
        f["strict"] = true;
      return pl::run_ingest({ ingest_in }, context(common, f));
    };
  });

  // filter
  auto *filter = app.add_subcommand("filter", "Apply the property window and cation filter");
  std::string filter_in, window;
  bool keep_all = false;
  filter->add_option("input", filter_in, "Input file")->required();
  filter->add_option("-w,--window", window, "Window JSON (default: table1.json from the data dir)");
  filter->add_flag("--keep-neutral", keep_all, "Skip the monocation filter");
  add_common(filter, common);
  filter->callback([&] {
    action = [&] {
      json f = json::object();
      if (keep_all)
        f["cations_only"] = false;
      return pl::run_filter({ filter_in, window }, context(common, f));
    };
  });

  // train-vae
  auto *vae = app.add_subcommand("train-vae", "Train the sequence VAE");
  std::vector<std::string> corpora;
  std::optional<int> epochs, batch, latent, hidden, max_molecules;
  std::optional<double> lr, beta_max;
  vae->add_option("corpora", corpora, "Training corpora")->required();
  vae->add_option("--epochs", epochs, "Training epochs");
  vae->add_option("--batch", batch, "Minibatch size");
  vae->add_option("--lr", lr, "Adam learning rate");
  vae->add_option("--beta-max", beta_max, "Final KL weight");
  vae->add_option("--latent", latent, "Latent dimension");
  vae->add_option("--hidden", hidden, "GRU hidden size");
  vae->add_option("--max-molecules", max_molecules, "Random subset size, 0 for all");
  add_common(vae, common);
  vae->callback([&] {
    action = [&] {
      json f = json::object();
      json model = json::object(), training = json::object();
      put(training, "epochs", epochs);
      put(training, "batch", batch);
      put(training, "lr", lr);
      put(training, "beta_max", beta_max);
      put(model, "latent", latent);
      put(model, "hidden", hidden);
      put(f, "max_molecules", max_molecules);
      if (!model.empty())
        f["model"] = model;
      if (!training.empty())
        f["training"] = training;
      return pl::run_train_vae({ paths(corpora) }, context(common, f));
    };
  });

  // encode
  auto *encode = app.add_subcommand("encode", "Encode molecules to latent means");
  std::string enc_ckpt, enc_in;
  encode->add_option("--checkpoint", enc_ckpt, "VAE checkpoint")->required();
  encode->add_option("input", enc_in, "Molecules to encode")->required();
  add_common(encode, common);
  encode->callback([&] {
    action = [&] { return pl::run_encode({ enc_ckpt, enc_in }, context(common, json::object())); };
  });

  // fit-gmm
  auto *gmm = app.add_subcommand("fit-gmm", "Fit the diagonal Gaussian mixture to latents");
  std::string gmm_in;
  std::optional<int> components, restarts;
  gmm->add_option("latents", gmm_in, "Latent container from encode")->required();
  gmm->add_option("-k,--components", components, "Mixture components");
  gmm->add_option("--restarts", restarts, "EM restarts");
  add_common(gmm, common);
  gmm->callback([&] {
    action = [&] {
      json f = json::object();
      put(f, "components", components);
      put(f, "restarts", restarts);
      return pl::run_fit_gmm({ gmm_in }, context(common, f));
    };
  });

  // train-clf
  auto *clf = app.add_subcommand("train-clf", "Train the latent low-LUMO classifier with CV");
  std::string clf_in;
  std::optional<double> threshold;
  std::optional<int> folds, clf_epochs;
  clf->add_option("latents", clf_in, "Latent container with lumo_ev labels")->required();
  clf->add_option("--threshold", threshold, "LUMO threshold in eV (inclusive)");
  clf->add_option("--folds", folds, "Cross-validation folds");
  clf->add_option("--epochs", clf_epochs, "Full-batch optimisation steps");
  add_common(clf, common);
  clf->callback([&] {
    action = [&] {
      json f = json::object();
      put(f, "lumo_threshold_ev", threshold);
      put(f, "folds", folds);
      put(f, "epochs", clf_epochs);
      return pl::run_train_clf({ clf_in }, context(common, f));
    };
  });

  // sample
  auto *sample = app.add_subcommand("sample", "Conditional rejection sampling from the mixture");
  std::string s_ckpt, s_gmm, s_clf;
  std::optional<long> target, max_draws;
  std::optional<double> temperature;
  sample->add_option("--checkpoint", s_ckpt, "VAE checkpoint")->required();
  sample->add_option("--gmm", s_gmm, "Mixture container")->required();
  sample->add_option("--classifier", s_clf, "Classifier container")->required();
  sample->add_option("-n,--target", target, "Accepted draws to collect");
  sample->add_option("--max-draws", max_draws, "Proposal budget");
  sample->add_option("--temperature", temperature, "Decoding temperature, 0 for greedy");
  add_common(sample, common);
  sample->callback([&] {
    action = [&] {
      json f = json::object();
      put(f, "target_accepted", target);
      put(f, "max_draws", max_draws);
      put(f, "temperature", temperature);
      return pl::run_sample({ s_ckpt, s_gmm, s_clf }, context(common, f));
    };
  });

  // screen
  auto *scr = app.add_subcommand("screen", "Chemistry filters and similarity binning");
  std::string scr_gen, scr_scores, scr_ref = "pag_reference.csv";
  std::vector<std::string> scr_train { "mini_zinc.smi", "pag_reference.csv" };
  scr->add_option("generated", scr_gen, "generated.smi from sample")->required();
  scr->add_option("--scores", scr_scores, "Classifier scores (default: generated_scores.json alongside)");
  scr->add_option("--training", scr_train, "Training corpora for the exact-match rule")->capture_default_str();
  scr->add_option("--reference", scr_ref, "Reference set for similarity")->capture_default_str();
  add_common(scr, common);
  scr->callback([&] {
    action = [&] {
      return pl::run_screen({ scr_gen, scr_scores, paths(scr_train), scr_ref }, context(common, json::object()));
    };
  });

  // metrics
  auto *met = app.add_subcommand("metrics", "Generation-quality metrics against a reference set");
  std::string met_gen, met_ref = "pag_reference.csv";
  std::vector<std::string> met_train { "mini_zinc.smi", "pag_reference.csv" };
  met->add_option("generated", met_gen, "Generated molecules")->required();
  met->add_option("--reference", met_ref, "Reference molecules")->capture_default_str();
  met->add_option("--training", met_train, "Training corpora for novelty")->capture_default_str();
  add_common(met, common);
  met->callback([&] {
    action = [&] { return pl::run_metrics({ met_gen, met_ref, paths(met_train) }, context(common, json::object())); };
  });

  // scaffolds
  auto *scf = app.add_subcommand("scaffolds", "Scaffold summary of generated vs reference");
  std::string scf_gen, scf_ref = "pag_reference.csv";
  scf->add_option("generated", scf_gen, "Generated molecules")->required();
  scf->add_option("--reference", scf_ref, "Reference molecules")->capture_default_str();
  add_common(scf, common);
  scf->callback([&] {
    action = [&] { return pl::run_scaffolds({ scf_gen, scf_ref }, context(common, json::object())); };
  });

  // dice-hist
  auto *dh = app.add_subcommand("dice-hist", "Histogram of pairwise Dice distances");
  std::string dh_in;
  std::optional<double> dh_width;
  dh->add_option("input", dh_in, "Molecules")->required();
  dh->add_option("--bin-width", dh_width, "Histogram bin width");
  add_common(dh, common);
  dh->callback([&] {
    action = [&] {
      json f = json::object();
      put(f, "bin_width", dh_width);
      return pl::run_dice_hist({ dh_in }, context(common, f));
    };
  });

  // serve
  auto *srv = app.add_subcommand("serve", "Adjudication HTTP service under /api/v1");
  std::string data_dir = ".", cand_file, labels_file, host = "127.0.0.1", static_dir;
  int port = 8080;
  srv->add_option("--data-dir", data_dir, "Directory holding candidates.json and labels.ndjson")->capture_default_str();
  srv->add_option("--candidates", cand_file, "Candidate file (default: DATA_DIR/candidates.json)");
  srv->add_option("--labels", labels_file, "Label log (default: DATA_DIR/labels.ndjson)");
  srv->add_option("--host", host, "Bind address")->capture_default_str();
  srv->add_option("--port", port, "Port")->capture_default_str();
  srv->add_option("--static", static_dir, "Directory of UI assets served at /");
  bool serve_requested = false;
  srv->callback([&] { serve_requested = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return pl::kExitConfigError;
  }

  try {
    if (serve_requested) {
      fs::path dir = data_dir;
      fs::path cands = cand_file.empty() ? dir / "candidates.json" : fs::path(cand_file);
      fs::path labels = labels_file.empty() ? dir / "labels.ndjson" : fs::path(labels_file);
      auto store = pagforge::adj::CandidateStore::load(pl::resolve_input(cands));
      pagforge::adj::AdjudicationService service(std::move(store), labels);
      std::optional<fs::path> assets;
      if (!static_dir.empty())
        assets = pl::resolve_input(static_dir);
      std::cerr << "serving " << service.store().candidates().size() << " candidates, "
                << service.store().scaffolds().size() << " scaffolds on http://" << host << ":"
                << port << "/api/v1\n";
      return pagforge::adj::serve(service, host, port, assets) == 0 ? pl::kExitOk : pl::kExitStageFailure;
    }
    json summary = action();
    std::cout << summary.dump(2) << "\n";
    return pl::kExitOk;
  } catch (const pagforge::InvalidArgument &e) {
    // Bad values in candidate files and similar inputs are stage failures.
    std::cerr << "error: " << e.what() << "\n";
    return pl::kExitStageFailure;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return pl::exit_code_for(e);
  }
}
