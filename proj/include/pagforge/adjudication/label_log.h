//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_ADJUDICATION_LABEL_LOG_H_
#define PAGFORGE_ADJUDICATION_LABEL_LOG_H_

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

namespace pagforge::adj {

enum class Decision { kAccept, kUncertain, kReject };

const char *to_string(Decision d);
std::optional<Decision> parse_decision(const std::string &s);

struct LabelRecord {
  std::string scaffold_id;
  Decision decision = Decision::kUncertain;
  std::string annotator = "sme";
  std::string timestamp;  // ISO 8601 UTC
  std::string note;
  long version = 0;       // 1-based position in the log

  nlohmann::json to_json() const;
  // Throws InvalidArgument for missing fields or an unknown decision.
  static LabelRecord from_json(const nlohmann::json &j);
};

struct EffectiveLabel {
  Decision decision;
  long version;
};

/// Append-only label history backed by a newline-delimited JSON file.
/// Every append is flushed and fsync'ed before it becomes visible. Opening
/// an existing file replays it; lines that do not parse (a torn final write)
/// are skipped and counted. Writers are serialized, readers share a lock.
class LabelLog {
public:
  explicit LabelLog(std::filesystem::path path);
  ~LabelLog();
  LabelLog(const LabelLog &) = delete;
  LabelLog &operator=(const LabelLog &) = delete;

  // Assigns version and, if empty, timestamp. Returns the stored record.
  LabelRecord append(LabelRecord record);

  std::vector<LabelRecord> history() const;
  // Latest record per scaffold, whichever annotator wrote it.
  std::map<std::string, EffectiveLabel> effective() const;
  // Latest record per (scaffold, annotator).
  std::map<std::pair<std::string, std::string>, LabelRecord> latest_by_annotator() const;

  std::size_t size() const;
  std::size_t skipped_lines() const { return skipped_; }
  const std::filesystem::path &path() const { return path_; }

private:
  void apply(const LabelRecord &r);

  std::filesystem::path path_;
  int fd_ = -1;
  mutable std::shared_mutex mutex_;
  std::vector<LabelRecord> history_;
  std::map<std::string, EffectiveLabel> effective_;
  std::size_t skipped_ = 0;
};

} // namespace pagforge::adj

#endif // PAGFORGE_ADJUDICATION_LABEL_LOG_H_
