//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/adjudication/service.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <httplib.h>

#include "pagforge/adjudication/depict.h"

namespace pagforge::adj {
namespace {

constexpr const char *kProbabilityNote =
    "classifier_probability is the latent classifier's predicted probability of the "
    "low-LUMO class; it is not a computed LUMO energy";

Response json_response(int status, const nlohmann::json &j) {
  return { status, "application/json", j.dump(2) + "\n" };
}

Response error_response(int status, const std::string &message) {
  return json_response(status, { { "error", message }, { "status", status } });
}

std::vector<std::string> split_path(const std::string &path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c: path) {
    if (c == '/') {
      if (!cur.empty())
        parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty())
    parts.push_back(cur);
  return parts;
}

int int_param(const Query &q, const std::string &key, int fallback) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty())
    return fallback;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(it->second, &used);
  } catch (const std::exception &) {
    throw InvalidArgument(key + " must be an integer");
  }
  if (used != it->second.size())
    throw InvalidArgument(key + " must be an integer");
  return v;
}

double double_param(const Query &q, const std::string &key, double fallback) {
  auto it = q.find(key);
  if (it == q.end() || it->second.empty())
    return fallback;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(it->second, &used);
  } catch (const std::exception &) {
    throw InvalidArgument(key + " must be a number");
  }
  if (used != it->second.size())
    throw InvalidArgument(key + " must be a number");
  return v;
}

bool flag_param(const Query &q, const std::string &key) {
  auto it = q.find(key);
  return it != q.end() && (it->second == "1" || it->second == "true" || it->second.empty());
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

} // namespace

AdjudicationService::AdjudicationService(CandidateStore store,
                                         const std::filesystem::path &label_path)
    : store_(std::move(store)), labels_(label_path) {}

LabelRecord AdjudicationService::submit_label(const LabelRecord &record) {
  if (!store_.find_scaffold(record.scaffold_id))
    throw NotFoundError("unknown scaffold " + record.scaffold_id);
  return labels_.append(record);
}

std::map<std::string, Decision> AdjudicationService::effective_labels() const {
  std::map<std::string, Decision> out;
  for (const auto &[id, e]: labels_.effective())
    out[id] = e.decision;
  return out;
}

std::map<std::string, Decision> AdjudicationService::molecule_states() const {
  auto eff = labels_.effective();
  std::map<std::string, Decision> out;
  for (const auto &c: store_.candidates()) {
    long best = 0;
    for (const auto &sid: c.scaffold_ids) {
      auto it = eff.find(sid);
      if (it != eff.end() && it->second.version > best) {
        best = it->second.version;
        out[c.id] = it->second.decision;
      }
    }
  }
  return out;
}

nlohmann::json AdjudicationService::candidate_json(
    const Candidate &c, const std::map<std::string, Decision> &states) const {
  auto it = states.find(c.id);
  return {
    { "id", c.id },
    { "smiles", c.smiles },
    { "scaffold_ids", c.scaffold_ids },
    { "descriptors", descriptors_json(c.descriptors) },
    { "classifier_probability", c.classifier_score },
    { "max_ref_similarity", c.max_ref_similarity },
    { "depiction", "/api/v1/depict/" + c.id },
    { "decision", it == states.end() ? nlohmann::json(nullptr) : nlohmann::json(to_string(it->second)) },
  };
}

nlohmann::json AdjudicationService::scaffold_json(const Scaffold &s, bool detail) const {
  auto eff = labels_.effective();
  auto it = eff.find(s.id);
  nlohmann::json j {
    { "id", s.id },
    { "smiles", s.smiles },
    { "descriptors", descriptors_json(s.descriptors) },
    { "parents", s.parents },
    { "max_classifier_probability", s.max_parent_score },
    { "depiction", "/api/v1/depict/" + s.id },
    { "decision", it == eff.end() ? nlohmann::json(nullptr) : nlohmann::json(to_string(it->second.decision)) },
  };
  if (detail) {
    auto states = molecule_states();
    nlohmann::json parents = nlohmann::json::array();
    for (const auto &p: s.parents)
      parents.push_back(candidate_json(*store_.find_candidate(p), states));
    j["parent_molecules"] = parents;
    nlohmann::json history = nlohmann::json::array();
    for (const auto &r: labels_.history()) {
      if (r.scaffold_id == s.id)
        history.push_back(r.to_json());
    }
    j["history"] = history;
  }
  return j;
}

nlohmann::json AdjudicationService::scaffold_list(bool unlabeled_only) const {
  auto eff = labels_.effective();
  nlohmann::json items = nlohmann::json::array();
  for (int i: store_.queue_order()) {
    const auto &s = store_.scaffolds()[i];
    if (unlabeled_only && eff.count(s.id))
      continue;
    items.push_back(scaffold_json(s, false));
  }
  return { { "total", items.size() }, { "items", items } };
}

nlohmann::json AdjudicationService::candidate_page(int page, int per_page) const {
  if (page < 1)
    throw InvalidArgument("page must be >= 1");
  if (per_page < 1 || per_page > 500)
    throw InvalidArgument("per_page must lie in [1, 500]");
  auto order = store_.candidate_order();
  auto states = molecule_states();
  nlohmann::json items = nlohmann::json::array();
  std::size_t begin = static_cast<std::size_t>(page - 1) * per_page;
  for (std::size_t k = begin; k < order.size() && k < begin + per_page; ++k)
    items.push_back(candidate_json(store_.candidates()[order[k]], states));
  return { { "page", page }, { "per_page", per_page }, { "total", order.size() }, { "items", items } };
}

nlohmann::json AdjudicationService::network_json(double threshold) const {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw InvalidArgument("threshold must lie in (0, 1]");
  auto g = build_network(store_, threshold);
  auto eff = labels_.effective();
  auto states = molecule_states();
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto &s: store_.scaffolds()) {
    auto it = eff.find(s.id);
    nodes.push_back({ { "id", s.id }, { "kind", "scaffold" }, { "size", "large" },
                      { "smiles", s.smiles }, { "depiction", "/api/v1/depict/" + s.id },
                      { "descriptors", descriptors_json(s.descriptors) },
                      { "decision", it == eff.end() ? nlohmann::json(nullptr)
                                                    : nlohmann::json(to_string(it->second.decision)) } });
  }
  for (const auto &c: store_.candidates()) {
    auto it = states.find(c.id);
    nodes.push_back({ { "id", c.id }, { "kind", "molecule" }, { "size", "small" },
                      { "smiles", c.smiles }, { "depiction", "/api/v1/depict/" + c.id },
                      { "descriptors", descriptors_json(c.descriptors) },
                      { "decision", it == states.end() ? nlohmann::json(nullptr)
                                                       : nlohmann::json(to_string(it->second)) } });
  }
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t k = 0; k < g.scaffold_edges.size(); ++k) {
    edges.push_back({ { "source", g.scaffold_edges[k].first }, { "target", g.scaffold_edges[k].second },
                      { "kind", "similarity" }, { "dice_distance", g.scaffold_edge_distances[k] } });
  }
  for (const auto &[m, s]: g.derivation_edges)
    edges.push_back({ { "source", m }, { "target", s }, { "kind", "derivation" } });
  return { { "threshold", threshold },
           { "nodes", nodes },
           { "edges", edges },
           { "similarity_edge_count", g.scaffold_edges.size() },
           { "derivation_edge_count", g.derivation_edges.size() } };
}

nlohmann::json AdjudicationService::progress() const {
  auto eff = labels_.effective();
  long counts[3] = { 0, 0, 0 };
  for (const auto &[id, e]: eff)
    ++counts[static_cast<int>(e.decision)];
  return { { "accept", counts[0] },
           { "uncertain", counts[1] },
           { "reject", counts[2] },
           { "labeled", eff.size() },
           { "unlabeled", store_.scaffolds().size() - eff.size() },
           { "total", store_.scaffolds().size() },
           { "log_records", labels_.size() } };
}

nlohmann::json AdjudicationService::export_adjudicated() const {
  auto eff = labels_.effective();
  if (eff.empty())
    throw NoLabelsError("nothing to export: no labels recorded yet");
  nlohmann::json groups = nlohmann::json::object();
  for (Decision d: { Decision::kAccept, Decision::kUncertain, Decision::kReject }) {
    nlohmann::json scaffolds = nlohmann::json::array();
    std::set<std::string> parent_ids;
    for (const auto &s: store_.scaffolds()) {
      auto it = eff.find(s.id);
      if (it == eff.end() || it->second.decision != d)
        continue;
      scaffolds.push_back({ { "id", s.id }, { "smiles", s.smiles },
                            { "descriptors", descriptors_json(s.descriptors) },
                            { "parents", s.parents } });
      parent_ids.insert(s.parents.begin(), s.parents.end());
    }
    nlohmann::json parents = nlohmann::json::array();
    double sum_p = 0.0, sum_mw = 0.0, sum_logp = 0.0, sum_sa = 0.0, sum_atoms = 0.0;
    for (const auto &pid: parent_ids) {
      const Candidate &c = *store_.find_candidate(pid);
      parents.push_back({ { "id", c.id }, { "smiles", c.smiles },
                          { "classifier_probability", c.classifier_score },
                          { "max_ref_similarity", c.max_ref_similarity },
                          { "descriptors", descriptors_json(c.descriptors) } });
      sum_p += c.classifier_score;
      sum_mw += c.descriptors.mw;
      sum_logp += c.descriptors.logp;
      sum_sa += c.descriptors.sa;
      sum_atoms += c.descriptors.num_atoms;
    }
    double n = static_cast<double>(parent_ids.size());
    auto mean = [&](double s) { return n > 0 ? nlohmann::json(s / n) : nlohmann::json(nullptr); };
    groups[to_string(d)] = {
      { "scaffold_count", scaffolds.size() },
      { "scaffolds", scaffolds },
      { "parent_molecules", parents },
      { "mean_classifier_probability", mean(sum_p) },
      { "parent_descriptor_means",
        { { "mw", mean(sum_mw) }, { "logp", mean(sum_logp) }, { "sa", mean(sum_sa) },
          { "num_atoms", mean(sum_atoms) } } },
    };
  }
  return { { "note", kProbabilityNote },
           { "labeled_scaffolds", eff.size() },
           { "unlabeled_scaffolds", store_.scaffolds().size() - eff.size() },
           { "groups", groups } };
}

std::string AdjudicationService::export_text() const {
  auto j = export_adjudicated();
  std::ostringstream out;
  out << "Adjudicated scaffolds: " << j["labeled_scaffolds"].get<long>() << " labeled, "
      << j["unlabeled_scaffolds"].get<long>() << " unlabeled\n";
  out << "Note: " << kProbabilityNote << "\n";
  for (const char *name: { "accept", "uncertain", "reject" }) {
    const auto &g = j["groups"][name];
    out << "\n== " << name << " (" << g["scaffold_count"].get<long>() << " scaffolds, "
        << g["parent_molecules"].size() << " parent molecules";
    if (!g["mean_classifier_probability"].is_null())
      out << ", mean classifier probability "
          << fixed(g["mean_classifier_probability"].get<double>(), 3);
    out << ") ==\n";
    for (const auto &s: g["scaffolds"]) {
      out << s["id"].get<std::string>() << "  " << s["smiles"].get<std::string>() << "\n";
      for (const auto &pid: s["parents"]) {
        const Candidate &c = *store_.find_candidate(pid.get<std::string>());
        out << "    " << c.id << "  " << c.smiles
            << "  classifier p(low LUMO) = " << fixed(c.classifier_score, 3) << "\n";
      }
    }
  }
  return out.str();
}

Response AdjudicationService::handle(const std::string &method, const std::string &path,
                                     const Query &query, const std::string &body) {
  auto parts = split_path(path);
  if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1")
    return error_response(404, "no such endpoint: " + path);
  const std::string &what = parts[2];
  try {
    if (method == "GET") {
      if (what == "candidates" && parts.size() == 3)
        return json_response(200, candidate_page(int_param(query, "page", 1),
                                                 int_param(query, "per_page", 50)));
      if (what == "scaffolds" && parts.size() == 3)
        return json_response(200, scaffold_list(flag_param(query, "unlabeled")));
      if (what == "scaffolds" && parts.size() == 4) {
        const Scaffold *s = store_.find_scaffold(parts[3]);
        if (!s)
          return error_response(404, "unknown scaffold " + parts[3]);
        return json_response(200, scaffold_json(*s, true));
      }
      if (what == "network" && parts.size() == 3)
        return json_response(200, network_json(double_param(query, "threshold", kDefaultLinkThreshold)));
      if (what == "labels" && parts.size() == 3) {
        nlohmann::json history = nlohmann::json::array();
        for (const auto &r: labels_.history())
          history.push_back(r.to_json());
        nlohmann::json eff = nlohmann::json::object();
        for (const auto &[id, d]: effective_labels())
          eff[id] = to_string(d);
        nlohmann::json mol = nlohmann::json::object();
        for (const auto &[id, d]: molecule_states())
          mol[id] = to_string(d);
        return json_response(200, { { "history", history }, { "effective", eff }, { "molecules", mol } });
      }
      if (what == "export" && parts.size() == 3) {
        auto fmt = query.count("format") ? query.at("format") : std::string("json");
        if (fmt == "text")
          return { 200, "text/plain; charset=utf-8", export_text() };
        if (fmt != "json")
          return error_response(400, "format must be json or text");
        return json_response(200, export_adjudicated());
      }
      if (what == "progress" && parts.size() == 3)
        return json_response(200, progress());
      if (what == "depict" && parts.size() == 4) {
        if (const Scaffold *s = store_.find_scaffold(parts[3]))
          return { 200, "image/svg+xml", depict_svg(s->mol, s->id + " " + s->smiles) };
        if (const Candidate *c = store_.find_candidate(parts[3]))
          return { 200, "image/svg+xml", depict_svg(c->mol, c->id + " " + c->smiles) };
        return error_response(404, "unknown molecule or scaffold " + parts[3]);
      }
    } else if (method == "POST" && what == "labels" && parts.size() == 3) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(body);
      } catch (const nlohmann::json::exception &ex) {
        return error_response(400, std::string("body is not valid JSON: ") + ex.what());
      }
      LabelRecord r = LabelRecord::from_json(j);
      r.version = 0;
      r.timestamp.clear();
      return json_response(201, submit_label(r).to_json());
    }
  } catch (const NotFoundError &ex) {
    return error_response(404, ex.what());
  } catch (const InvalidArgument &ex) {
    return error_response(400, ex.what());
  } catch (const NoLabelsError &ex) {
    return error_response(409, ex.what());
  } catch (const std::exception &ex) {
    return error_response(500, ex.what());
  }
  return error_response(404, "no such endpoint: " + method + " " + path);
}

void AdjudicationService::mount(httplib::Server &server,
                                const std::optional<std::filesystem::path> &static_dir) {
  auto bridge = [this](const httplib::Request &req, httplib::Response &res) {
    Query q;
    for (const auto &[k, v]: req.params)
      q.emplace(k, v);
    Response r = handle(req.method, req.path, q, req.body);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  server.Get(R"(/api/v1/.*)", bridge);
  server.Post(R"(/api/v1/.*)", bridge);
  if (static_dir)
    server.set_mount_point("/", static_dir->string());
}

int serve(AdjudicationService &service, const std::string &host, int port,
          const std::optional<std::filesystem::path> &static_dir) {
  httplib::Server server;
  service.mount(server, static_dir);
  if (!server.listen(host, port))
    return 1;
  return 0;
}

} // namespace pagforge::adj
