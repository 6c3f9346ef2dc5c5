//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_ADJUDICATION_SERVICE_H_
#define PAGFORGE_ADJUDICATION_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "pagforge/adjudication/label_log.h"
#include "pagforge/adjudication/network.h"
#include "pagforge/adjudication/store.h"
#include "pagforge/util/error.h"

namespace httplib {
class Server;
}

namespace pagforge::adj {

class NoLabelsError: public Error {
public:
  using Error::Error;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

using Query = std::map<std::string, std::string>;

/// Scaffold review backend. Everything it reports is a function of the
/// candidate store and the label log.
class AdjudicationService {
public:
  AdjudicationService(CandidateStore store, const std::filesystem::path &label_path);

  const CandidateStore &store() const { return store_; }
  LabelLog &labels() { return labels_; }

  // Throws NotFoundError for an unknown scaffold, InvalidArgument otherwise.
  LabelRecord submit_label(const LabelRecord &record);

  std::map<std::string, Decision> effective_labels() const;
  // A molecule shows the decision of its most recently labeled scaffold.
  std::map<std::string, Decision> molecule_states() const;

  // Throws NoLabelsError before the first label.
  nlohmann::json export_adjudicated() const;
  std::string export_text() const;

  nlohmann::json progress() const;
  nlohmann::json network_json(double threshold) const;
  nlohmann::json candidate_page(int page, int per_page) const;
  nlohmann::json scaffold_json(const Scaffold &s, bool detail) const;
  nlohmann::json scaffold_list(bool unlabeled_only) const;

  // Transport-independent dispatch for /api/v1/...
  Response handle(const std::string &method, const std::string &path, const Query &query,
                  const std::string &body);

  // Registers all routes on an httplib server; static_dir, if set, is
  // served at "/".
  void mount(httplib::Server &server, const std::optional<std::filesystem::path> &static_dir = {});

private:
  nlohmann::json candidate_json(const Candidate &c,
                                const std::map<std::string, Decision> &states) const;

  CandidateStore store_;
  LabelLog labels_;
};

// Blocks serving on host:port until the server is stopped.
int serve(AdjudicationService &service, const std::string &host, int port,
          const std::optional<std::filesystem::path> &static_dir = {});

} // namespace pagforge::adj

#endif // PAGFORGE_ADJUDICATION_SERVICE_H_
