//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/adjudication/label_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>

#include "pagforge/util/clock.h"
#include "pagforge/util/error.h"

namespace pagforge::adj {
namespace {

void write_all(int fd, const std::string &data, const std::filesystem::path &path) {
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR)
        continue;
      throw Error("write to " + path.string() + " failed: " + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
  if (::fsync(fd) != 0)
    throw Error("fsync of " + path.string() + " failed: " + std::strerror(errno));
}

} // namespace

const char *to_string(Decision d) {
  switch (d) {
  case Decision::kAccept: return "accept";
  case Decision::kUncertain: return "uncertain";
  case Decision::kReject: return "reject";
  }
  return "uncertain";
}

std::optional<Decision> parse_decision(const std::string &s) {
  if (s == "accept")
    return Decision::kAccept;
  if (s == "uncertain")
    return Decision::kUncertain;
  if (s == "reject")
    return Decision::kReject;
  return std::nullopt;
}

nlohmann::json LabelRecord::to_json() const {
  return {
    { "version", version },     { "scaffold_id", scaffold_id }, { "decision", to_string(decision) },
    { "annotator", annotator }, { "timestamp", timestamp },     { "note", note },
  };
}

LabelRecord LabelRecord::from_json(const nlohmann::json &j) {
  if (!j.is_object())
    throw InvalidArgument("label must be a JSON object");
  LabelRecord r;
  try {
    r.scaffold_id = j.at("scaffold_id").get<std::string>();
    std::string d = j.at("decision").get<std::string>();
    auto parsed = parse_decision(d);
    if (!parsed)
      throw InvalidArgument("decision must be accept, uncertain or reject, got '" + d + "'");
    r.decision = *parsed;
    r.annotator = j.value("annotator", std::string("sme"));
    r.timestamp = j.value("timestamp", std::string());
    r.note = j.value("note", std::string());
    r.version = j.value("version", 0L);
  } catch (const nlohmann::json::exception &ex) {
    throw InvalidArgument(std::string("malformed label: ") + ex.what());
  }
  if (r.scaffold_id.empty())
    throw InvalidArgument("scaffold_id must not be empty");
  if (r.annotator.empty())
    r.annotator = "sme";
  return r;
}

LabelLog::LabelLog(std::filesystem::path path): path_(std::move(path)) {
  bool needs_newline = false;
  {
    std::ifstream in(path_, std::ios::binary);
    if (in) {
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty())
          continue;
        try {
          auto rec = LabelRecord::from_json(nlohmann::json::parse(line));
          rec.version = static_cast<long>(history_.size()) + 1;
          apply(rec);
        } catch (const std::exception &) {
          ++skipped_;
        }
      }
      in.clear();
      in.seekg(0, std::ios::end);
      if (in.tellg() > 0) {
        in.seekg(-1, std::ios::end);
        needs_newline = in.get() != '\n';
      }
    }
  }
  if (path_.has_parent_path())
    std::filesystem::create_directories(path_.parent_path());
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0)
    throw Error("cannot open label log " + path_.string() + ": " + std::strerror(errno));
  // Seal a torn tail so the next record starts on its own line.
  if (needs_newline)
    write_all(fd_, "\n", path_);
}

LabelLog::~LabelLog() {
  if (fd_ >= 0)
    ::close(fd_);
}

void LabelLog::apply(const LabelRecord &r) {
  history_.push_back(r);
  effective_[r.scaffold_id] = EffectiveLabel { r.decision, r.version };
}

LabelRecord LabelLog::append(LabelRecord record) {
  std::unique_lock lock(mutex_);
  if (record.timestamp.empty())
    record.timestamp = utc_timestamp();
  if (record.annotator.empty())
    record.annotator = "sme";
  record.version = static_cast<long>(history_.size()) + 1;
  write_all(fd_, record.to_json().dump() + "\n", path_);
  apply(record);
  return record;
}

std::vector<LabelRecord> LabelLog::history() const {
  std::shared_lock lock(mutex_);
  return history_;
}

std::map<std::string, EffectiveLabel> LabelLog::effective() const {
  std::shared_lock lock(mutex_);
  return effective_;
}

std::map<std::pair<std::string, std::string>, LabelRecord> LabelLog::latest_by_annotator() const {
  std::shared_lock lock(mutex_);
  std::map<std::pair<std::string, std::string>, LabelRecord> out;
  for (const auto &r: history_)
    out[{ r.scaffold_id, r.annotator }] = r;
  return out;
}

std::size_t LabelLog::size() const {
  std::shared_lock lock(mutex_);
  return history_.size();
}

} // namespace pagforge::adj
