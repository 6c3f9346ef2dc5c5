//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_PIPELINE_STAGES_H_
#define PAGFORGE_PIPELINE_STAGES_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pagforge/util/error.h"

namespace pagforge::pipeline {

namespace fs = std::filesystem;

// Exit status classes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitStageFailure = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitConfigError = 3;

class MissingInput: public NotFoundError {
public:
  using NotFoundError::NotFoundError;
};

class ConfigError: public Error {
public:
  using Error::Error;
};

int exit_code_for(const std::exception &e);

// PAGFORGE_DATA_DIR if set, else the bundled data directory.
fs::path data_dir();

// An existing path as given, else the same relative path under data_dir().
// Throws MissingInput.
fs::path resolve_input(const fs::path &path);

/// Overlays user settings on a stage's defaults. Keys unknown to the
/// defaults and type changes (other than int vs float) raise ConfigError.
nlohmann::json merge_config(const nlohmann::json &defaults, const nlohmann::json &overlay,
                            const std::string &where = "config");

// Parses a JSON config file; ConfigError on syntax errors, MissingInput
// when the file is absent.
nlohmann::json load_config_file(const fs::path &path);

struct StageContext {
  fs::path out_dir = ".";
  std::uint64_t master_seed = 1;
  int threads = 0;
  nlohmann::json config_file = nlohmann::json::object();  // from --config
  nlohmann::json overrides = nlohmann::json::object();    // from flags
};

std::uint64_t stage_seed(std::uint64_t master, const std::string &stage);

/// Per-directory record of stage runs: inputs and outputs with SHA-256,
/// effective config and hash, seed and wall-clock timestamps.
class Manifest {
public:
  static Manifest load(const fs::path &out_dir);
  void record(const std::string &stage, const std::vector<fs::path> &inputs,
              const std::vector<fs::path> &outputs, const nlohmann::json &config,
              std::uint64_t seed, const std::string &started, const std::string &finished);
  void save() const;
  const nlohmann::json &doc() const { return doc_; }

private:
  fs::path path_;
  nlohmann::json doc_;
};

// Each stage writes into ctx.out_dir, updates its manifest and returns the
// stage summary that was also written as JSON.

struct IngestInputs {
  fs::path input;
};
nlohmann::json run_ingest(const IngestInputs &in, const StageContext &ctx);

struct FilterInputs {
  fs::path input;
  fs::path window;  // empty: bundled table1.json
};
nlohmann::json run_filter(const FilterInputs &in, const StageContext &ctx);

struct TrainVaeInputs {
  std::vector<fs::path> corpora;
};
nlohmann::json run_train_vae(const TrainVaeInputs &in, const StageContext &ctx);

struct EncodeInputs {
  fs::path checkpoint;
  fs::path input;
};
nlohmann::json run_encode(const EncodeInputs &in, const StageContext &ctx);

struct FitGmmInputs {
  fs::path latents;
};
nlohmann::json run_fit_gmm(const FitGmmInputs &in, const StageContext &ctx);

struct TrainClfInputs {
  fs::path latents;
};
nlohmann::json run_train_clf(const TrainClfInputs &in, const StageContext &ctx);

struct SampleInputs {
  fs::path checkpoint;
  fs::path gmm;
  fs::path classifier;
};
nlohmann::json run_sample(const SampleInputs &in, const StageContext &ctx);

struct ScreenInputs {
  fs::path generated;
  fs::path scores;  // empty: generated_scores.json next to generated
  std::vector<fs::path> training;
  fs::path reference;
};
nlohmann::json run_screen(const ScreenInputs &in, const StageContext &ctx);

struct MetricsInputs {
  fs::path generated;
  fs::path reference;
  std::vector<fs::path> training;
};
nlohmann::json run_metrics(const MetricsInputs &in, const StageContext &ctx);

struct ScaffoldsInputs {
  fs::path generated;
  fs::path reference;
};
nlohmann::json run_scaffolds(const ScaffoldsInputs &in, const StageContext &ctx);

struct DiceHistInputs {
  fs::path input;
};
nlohmann::json run_dice_hist(const DiceHistInputs &in, const StageContext &ctx);

// Stage defaults, as echoed into the outputs.
nlohmann::json default_config(const std::string &stage);

} // namespace pagforge::pipeline

#endif // PAGFORGE_PIPELINE_STAGES_H_
