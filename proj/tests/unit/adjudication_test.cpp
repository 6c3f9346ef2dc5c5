//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "pagforge/adjudication/depict.h"
#include "pagforge/adjudication/network.h"
#include "pagforge/adjudication/service.h"
#include "pagforge/chem/smiles.h"

namespace pagforge::adj {
namespace {

namespace fs = std::filesystem;

nlohmann::json toy_candidates() {
  return nlohmann::json::array({
    { { "id", "G1" }, { "smiles", "C[S+](C)c1ccc(C(=O)c2ccccc2)cc1" }, { "classifier_score", 0.91 }, { "max_ref_similarity", 0.4 } },
    { { "id", "G2" }, { "smiles", "C[S+]1CCCC1" }, { "classifier_score", 0.62 }, { "max_ref_similarity", 0.3 } },
    { { "id", "G3" }, { "smiles", "CC[S+](CC)c1ccc2ccccc2c1" }, { "classifier_score", 0.77 }, { "max_ref_similarity", 0.5 } },
    { { "id", "G4" }, { "smiles", "C[S+](C)Cc1ccsc1" }, { "classifier_score", 0.55 }, { "max_ref_similarity", 0.2 } },
    { { "id", "G5" }, { "smiles", "C[S+](C)C1CCCCC1" }, { "classifier_score", 0.83 }, { "max_ref_similarity", 0.1 } },
    { { "id", "G6" }, { "smiles", "c1ccccc1C(=O)Oc1ccc([S+]2CCCC2)cc1" }, { "classifier_score", 0.71 }, { "max_ref_similarity", 0.6 } },
  });
}

fs::path temp_path(const std::string &name) {
  fs::path dir = fs::temp_directory_path() / "pagforge_adj_test";
  fs::create_directories(dir);
  fs::path p = dir / name;
  fs::remove(p);
  return p;
}

desc::Fingerprint bits(int from, int count) {
  desc::Fingerprint fp(2048);
  for (int i = from; i < from + count; ++i)
    fp.set(i);
  return fp;
}

TEST(NetworkTest, ThresholdBoundary) {
  // |a| = |b| = 1000 with c shared bits: dice distance = 1 - c / 1000.
  auto a = bits(0, 1000);
  auto linked = bits(1000 - 351, 1000);
  auto unlinked = bits(1000 - 349, 1000);
  EXPECT_NEAR(desc::dice_distance(a, linked), 0.649, 1e-12);
  EXPECT_NEAR(desc::dice_distance(a, unlinked), 0.651, 1e-12);
  EXPECT_EQ(similarity_edges({ a, linked }, 0.65).size(), 1u);
  EXPECT_TRUE(similarity_edges({ a, unlinked }, 0.65).empty());
  // Exactly at the threshold is not linked.
  auto half = bits(1000 - 350, 1000);
  EXPECT_TRUE(similarity_edges({ a, half }, 0.65).empty());
}

TEST(NetworkTest, EdgesMatchRuleAndDerivations) {
  auto store = CandidateStore::from_json(toy_candidates());
  ASSERT_GE(store.scaffolds().size(), 3u);
  auto g = build_network(store);
  std::set<std::pair<std::string, std::string>> edges(g.scaffold_edges.begin(), g.scaffold_edges.end());
  for (std::size_t i = 0; i < store.scaffolds().size(); ++i) {
    for (std::size_t j = 0; j < store.scaffolds().size(); ++j) {
      const auto &a = store.scaffolds()[i], &b = store.scaffolds()[j];
      bool expected = i < j && desc::dice_distance(a.fp, b.fp) < 0.65;
      EXPECT_EQ(edges.count({ a.id, b.id }) == 1, expected) << a.id << " " << b.id;
    }
  }
  std::size_t derivations = 0;
  for (const auto &c: store.candidates())
    derivations += c.scaffold_ids.size();
  EXPECT_EQ(g.derivation_edges.size(), derivations);
  for (const auto &[m, s]: g.derivation_edges) {
    const auto &ids = store.find_candidate(m)->scaffold_ids;
    EXPECT_NE(std::find(ids.begin(), ids.end(), s), ids.end());
  }
}

TEST(StoreTest, RejectsBadScores) {
  auto bad = toy_candidates();
  bad[0]["classifier_score"] = 1.0;
  EXPECT_THROW(CandidateStore::from_json(bad), InvalidArgument);
  bad = toy_candidates();
  bad[1]["smiles"] = "C1CC";
  EXPECT_THROW(CandidateStore::from_json(bad), InvalidArgument);
  EXPECT_THROW(CandidateStore::load("/nonexistent/candidates.json"), NotFoundError);
}

TEST(LabelLogTest, LastWriteWinsAndReplay) {
  auto path = temp_path("labels_replay.ndjson");
  auto store = CandidateStore::from_json(toy_candidates());
  const std::string sid = store.scaffolds()[0].id;
  std::map<std::string, Decision> before;
  std::uintmax_t size_after_first = 0;
  {
    AdjudicationService svc(store, path);
    svc.submit_label({ sid, Decision::kAccept });
    size_after_first = fs::file_size(path);
    svc.submit_label({ sid, Decision::kReject });
    svc.submit_label({ store.scaffolds()[1].id, Decision::kUncertain, "other", "", "second opinion" });
    EXPECT_GT(fs::file_size(path), size_after_first);
    before = svc.effective_labels();
    EXPECT_EQ(before.at(sid), Decision::kReject);
    EXPECT_THROW(svc.submit_label({ "S9999", Decision::kAccept }), NotFoundError);
    EXPECT_EQ(svc.labels().size(), 3u);
  }
  AdjudicationService again(store, path);
  EXPECT_EQ(again.effective_labels(), before);
  EXPECT_EQ(again.labels().size(), 3u);
  EXPECT_EQ(again.labels().skipped_lines(), 0u);
}

TEST(LabelLogTest, TornTailIsSkippedAndSealed) {
  auto path = temp_path("labels_torn.ndjson");
  {
    LabelLog log(path);
    log.append({ "S0001", Decision::kAccept });
  }
  {
    std::ofstream out(path, std::ios::app);
    out << R"({"scaffold_id":"S0002","decis)";
  }
  {
    LabelLog log(path);
    EXPECT_EQ(log.size(), 1u);
    EXPECT_EQ(log.skipped_lines(), 1u);
    log.append({ "S0002", Decision::kReject });
  }
  LabelLog log(path);
  EXPECT_EQ(log.size(), 2u);
  EXPECT_EQ(log.skipped_lines(), 1u);
  EXPECT_EQ(log.effective().at("S0002").decision, Decision::kReject);
}

TEST(LabelLogTest, ConcurrentWritersAllPersist) {
  auto path = temp_path("labels_concurrent.ndjson");
  {
    LabelLog log(path);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
      threads.emplace_back([&log, t] {
        for (int i = 0; i < 25; ++i) {
          log.append({ "S000" + std::to_string(t + 1), i % 2 ? Decision::kAccept : Decision::kReject });
          auto snapshot = log.effective();
          (void)snapshot;
        }
      });
    }
    for (auto &th: threads)
      th.join();
    EXPECT_EQ(log.size(), 100u);
  }
  LabelLog log(path);
  EXPECT_EQ(log.size(), 100u);
  EXPECT_EQ(log.skipped_lines(), 0u);
  // Each writer's final record (i = 24) is a reject.
  for (int t = 1; t <= 4; ++t)
    EXPECT_EQ(log.effective().at("S000" + std::to_string(t)).decision, Decision::kReject);
}

TEST(ExportTest, GroupsAndDeterminism) {
  auto path = temp_path("labels_export.ndjson");
  auto store = CandidateStore::from_json(toy_candidates());
  AdjudicationService svc(store, path);
  EXPECT_THROW(svc.export_adjudicated(), NoLabelsError);
  EXPECT_EQ(svc.handle("GET", "/api/v1/export", {}, "").status, 409);
  svc.submit_label({ store.scaffolds()[0].id, Decision::kAccept });
  svc.submit_label({ store.scaffolds()[1].id, Decision::kUncertain });
  svc.submit_label({ store.scaffolds()[2].id, Decision::kReject });
  auto j = svc.export_adjudicated();
  for (const char *g: { "accept", "uncertain", "reject" }) {
    EXPECT_EQ(j["groups"][g]["scaffold_count"].get<int>(), 1) << g;
    double sum = 0.0;
    for (const auto &p: j["groups"][g]["parent_molecules"])
      sum += p["classifier_probability"].get<double>();
    double n = static_cast<double>(j["groups"][g]["parent_molecules"].size());
    EXPECT_NEAR(j["groups"][g]["mean_classifier_probability"].get<double>(), sum / n, 1e-12);
  }
  auto first = svc.handle("GET", "/api/v1/export", {}, "");
  auto second = svc.handle("GET", "/api/v1/export", {}, "");
  EXPECT_EQ(first.status, 200);
  EXPECT_EQ(first.body, second.body);
  EXPECT_NE(first.body.find("classifier_probability"), std::string::npos);
  EXPECT_EQ(svc.export_text(), svc.export_text());
}

TEST(ServiceTest, MoleculesFollowLatestScaffoldLabel) {
  auto path = temp_path("labels_propagate.ndjson");
  auto store = CandidateStore::from_json(toy_candidates());
  AdjudicationService svc(store, path);
  const Candidate *multi = nullptr;
  for (const auto &c: store.candidates()) {
    if (c.scaffold_ids.size() >= 2)
      multi = &c;
  }
  ASSERT_NE(multi, nullptr);
  svc.submit_label({ multi->scaffold_ids[0], Decision::kAccept });
  EXPECT_EQ(svc.molecule_states().at(multi->id), Decision::kAccept);
  svc.submit_label({ multi->scaffold_ids[1], Decision::kReject });
  EXPECT_EQ(svc.molecule_states().at(multi->id), Decision::kReject);
}

TEST(ServiceTest, Routes) {
  auto path = temp_path("labels_routes.ndjson");
  AdjudicationService svc(CandidateStore::from_json(toy_candidates()), path);
  const std::string sid = svc.store().queue_order().empty() ? "" : svc.store().scaffolds()[svc.store().queue_order()[0]].id;

  auto page = svc.handle("GET", "/api/v1/candidates", { { "page", "1" }, { "per_page", "2" } }, "");
  ASSERT_EQ(page.status, 200);
  auto pj = nlohmann::json::parse(page.body);
  EXPECT_EQ(pj["total"].get<int>(), 6);
  ASSERT_EQ(pj["items"].size(), 2u);
  EXPECT_EQ(pj["items"][0]["id"], "G1");
  EXPECT_EQ(svc.handle("GET", "/api/v1/candidates", { { "page", "0" } }, "").status, 400);

  EXPECT_EQ(svc.handle("GET", "/api/v1/scaffolds/" + sid, {}, "").status, 200);
  EXPECT_EQ(svc.handle("GET", "/api/v1/scaffolds/S9999", {}, "").status, 404);

  auto post = svc.handle("POST", "/api/v1/labels", {}, R"({"scaffold_id":")" + sid + R"(","decision":"accept"})");
  EXPECT_EQ(post.status, 201);
  EXPECT_EQ(svc.handle("POST", "/api/v1/labels", {}, R"({"scaffold_id":"S9999","decision":"accept"})").status, 404);
  EXPECT_EQ(svc.handle("POST", "/api/v1/labels", {}, R"({"scaffold_id":")" + sid + R"(","decision":"maybe"})").status, 400);
  EXPECT_EQ(svc.handle("POST", "/api/v1/labels", {}, "{not json").status, 400);

  auto prog = nlohmann::json::parse(svc.handle("GET", "/api/v1/progress", {}, "").body);
  EXPECT_EQ(prog["accept"].get<int>(), 1);
  EXPECT_EQ(prog["labeled"].get<int>() + prog["unlabeled"].get<int>(), prog["total"].get<int>());

  auto queue = nlohmann::json::parse(svc.handle("GET", "/api/v1/scaffolds", { { "unlabeled", "1" } }, "").body);
  for (const auto &item: queue["items"])
    EXPECT_NE(item["id"], sid);

  auto net = svc.handle("GET", "/api/v1/network", { { "threshold", "0.9" } }, "");
  ASSERT_EQ(net.status, 200);
  auto nj = nlohmann::json::parse(net.body);
  EXPECT_EQ(nj["threshold"].get<double>(), 0.9);
  EXPECT_EQ(svc.handle("GET", "/api/v1/network", { { "threshold", "abc" } }, "").status, 400);

  auto svg = svc.handle("GET", "/api/v1/depict/G2", {}, "");
  EXPECT_EQ(svg.status, 200);
  EXPECT_EQ(svg.content_type, "image/svg+xml");
  EXPECT_EQ(svc.handle("GET", "/api/v1/depict/NOPE", {}, "").status, 404);
  EXPECT_EQ(svc.handle("GET", "/api/v2/progress", {}, "").status, 404);
}

TEST(ServiceTest, HttpRoundTrip) {
  auto path = temp_path("labels_http.ndjson");
  AdjudicationService svc(CandidateStore::from_json(toy_candidates()), path);
  httplib::Server server;
  svc.mount(server);
  int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/v1/progress");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  std::string sid = svc.store().scaffolds()[0].id;
  auto post = client.Post("/api/v1/labels", R"({"scaffold_id":")" + sid + R"(","decision":"uncertain"})",
                          "application/json");
  ASSERT_TRUE(post);
  EXPECT_EQ(post->status, 201);
  auto labels = client.Get("/api/v1/labels");
  ASSERT_TRUE(labels);
  EXPECT_EQ(nlohmann::json::parse(labels->body)["effective"][sid], "uncertain");
  auto net = client.Get("/api/v1/network?threshold=0.65");
  ASSERT_TRUE(net);
  EXPECT_EQ(net->status, 200);
  server.stop();
  worker.join();
}

TEST(DepictTest, BenzeneIsRegularHexagon) {
  auto mol = chem::parse_smiles("c1ccccc1");
  auto pos = layout_2d(mol);
  ASSERT_EQ(pos.size(), 6u);
  Point c;
  for (const auto &p: pos) {
    c.x += p.x / 6;
    c.y += p.y / 6;
  }
  for (int i = 0; i < 6; ++i) {
    const auto &p = pos[i], &q = pos[(i + 1) % 6];
    EXPECT_NEAR(std::hypot(p.x - q.x, p.y - q.y), 1.0, 1e-9);
    EXPECT_NEAR(std::hypot(p.x - c.x, p.y - c.y), 1.0, 1e-9);
  }
}

TEST(DepictTest, FusedRingsAndChains) {
  auto mol = chem::parse_smiles("CCCCc1ccc2ccccc2c1");
  auto pos = layout_2d(mol);
  for (int b = 0; b < mol.num_bonds(); ++b) {
    const auto &bond = mol.bond(b);
    EXPECT_NEAR(std::hypot(pos[bond.a].x - pos[bond.b].x, pos[bond.a].y - pos[bond.b].y), 1.0, 1e-6);
  }
  for (int i = 0; i < mol.num_atoms(); ++i) {
    for (int j = i + 1; j < mol.num_atoms(); ++j)
      EXPECT_GT(std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y), 0.5) << i << " " << j;
  }
  // Chain bond angle at the second carbon.
  double ax = pos[0].x - pos[1].x, ay = pos[0].y - pos[1].y;
  double bx = pos[2].x - pos[1].x, by = pos[2].y - pos[1].y;
  EXPECT_NEAR(std::acos(ax * bx + ay * by) * 180.0 / M_PI, 120.0, 1e-6);
}

TEST(DepictTest, DeterministicSvgWithCharge) {
  auto mol = chem::parse_smiles("C[S+](C)c1ccccc1");
  auto a = depict_svg(mol), b = depict_svg(mol);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("<svg", 0), 0u);
  EXPECT_NE(a.find(">S<tspan baseline-shift=\"super\" font-size=\"11\">+</tspan>"), std::string::npos);
  EXPECT_NE(depict_svg(chem::parse_smiles("[Na+].[Cl-]")).find(">-</tspan>"), std::string::npos);
}

} // namespace
} // namespace pagforge::adj
