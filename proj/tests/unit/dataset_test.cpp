//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/dataset/records.h"
#include "pagforge/dataset/tokenizer.h"
#include "pagforge/dataset/window.h"
#include "pagforge/descriptors/properties.h"

namespace {

using namespace pagforge;

std::string data_path(const std::string &name) {
  return std::string(PAGFORGE_TEST_DATA_DIR) + "/" + name;
}

// Independent single-pass re-check of every bound.
bool brute_force_inside(const chem::Molecule &mol,
                        const data::PropertyWindow &w) {
  int heavy = 0;
  for (const auto &a: mol.atoms()) {
    if (a.element == chem::kHydrogen)
      continue;
    ++heavy;
    std::string sym(chem::element(a.element).symbol);
    if (std::find(w.elements.begin(), w.elements.end(), sym) == w.elements.end())
      return false;
  }
  auto in = [](double v, data::Range r) { return r.min <= v && v <= r.max; };
  auto rings = chem::ring_stats(mol);
  return in(heavy, w.num_atoms) && in(desc::molecular_weight(mol), w.mw)
         && in(desc::crippen_logp(mol), w.logp) && in(desc::sa_score(mol), w.sa)
         && in(rings.ring_count, w.ring_count)
         && in(rings.max_ring_size, w.max_ring_size);
}

TEST(IngestTest, ReadsSmilesAndCsv) {
  auto r = data::ingest_text("C[S+](C)C\tA\nc1ccccc1 B\n\nCCO\n", {});
  ASSERT_EQ(r.records.size(), 3U);
  EXPECT_EQ(r.records[0].id, "A");
  EXPECT_EQ(r.records[1].id, "B");
  EXPECT_EQ(r.records[2].id, "L4");
  EXPECT_EQ(r.report.lines, 3);

  auto c = data::ingest_text("smiles,id,lumo_ev\nC[S+](C)C,P1,-5.2\nCC,P2,\n", {});
  ASSERT_EQ(c.records.size(), 2U);
  EXPECT_DOUBLE_EQ(*c.records[0].lumo_ev, -5.2);
  EXPECT_FALSE(c.records[1].lumo_ev.has_value());
}

TEST(IngestTest, StrictAndSkipModes) {
  std::string text = "CCO\nC1CC\nCC\n";
  try {
    data::ingest_text(text, { .strict = true });
    FAIL() << "strict ingest accepted an unclosed ring";
  } catch (const data::IngestError &e) {
    EXPECT_EQ(e.line(), 2);
  }
  auto r = data::ingest_text(text, { .strict = false });
  EXPECT_EQ(r.records.size(), 2U);
  ASSERT_EQ(r.report.skipped.size(), 1U);
  EXPECT_EQ(r.report.skipped[0].line, 2);
}

TEST(IngestTest, FlagsDuplicates) {
  auto r = data::ingest_text("CCO\nOCC\nC\n", {});
  ASSERT_EQ(r.report.duplicates.size(), 1U);
  EXPECT_EQ(r.report.duplicates[0].line, 2);
  EXPECT_EQ(r.report.duplicates[0].first_line, 1);
  EXPECT_EQ(r.report.to_json()["duplicates"].size(), 1U);
}

TEST(IngestTest, MissingFile) {
  EXPECT_THROW(data::ingest("/nonexistent/file.smi"), NotFoundError);
}

TEST(CationTest, KeepsMonocations) {
  auto r = data::ingest_text("C[S+](C)C\nc1ccccc1\n[NH4+].[Cl-]\nC[S+](C)CC[S+](C)C\n", {});
  auto kept = data::keep_cations(r.records);
  ASSERT_EQ(kept.size(), 1U);
  EXPECT_EQ(kept[0].smiles, "C[S+](C)C");
}

TEST(LumoTest, InclusiveThreshold) {
  auto r = data::ingest_text("smiles,id,lumo_ev\nC,a,-5.2\nC,b,-4.9\nC,c,-5.0\n", {});
  EXPECT_EQ(data::label_lumo(r.records, -5.0), (std::vector<int> { 1, 0, 1 }));
  auto missing = data::ingest_text("smiles,id,lumo_ev\nC,a,\n", {});
  EXPECT_THROW(data::label_lumo(missing.records, -5.0), InvalidArgument);
}

TEST(WindowTest, BoundaryExamples) {
  auto w = data::table1_window();
  auto check = [&](const std::string &smi) {
    auto mol = chem::parse_smiles(smi);
    return data::window_violations(mol, desc::compute_descriptors(mol), w);
  };
  EXPECT_TRUE(check("C[S+](C)C").empty());
  EXPECT_EQ(check("C[P+](C)(C)C"), (std::vector<std::string> { "elements" }));
  EXPECT_TRUE(check("C=[N+](C)C").empty());  // 58.104 g/mol, just inside
  auto low = check("C[NH3+]");
  EXPECT_NE(std::find(low.begin(), low.end(), "mw"), low.end());
}

TEST(WindowTest, JsonMatchesBuiltIn) {
  std::ifstream in(data_path("table1.json"));
  auto w = data::PropertyWindow::from_json(nlohmann::json::parse(in));
  EXPECT_EQ(w.to_json(), data::table1_window().to_json());
  auto bad = w.to_json();
  bad["sa"]["min"] = 9.0;
  EXPECT_THROW(data::PropertyWindow::from_json(bad), InvalidArgument);
}

TEST(WindowTest, BruteForceIdempotentAndCommuting) {
  auto corpus = data::ingest(data_path("mini_zinc.smi")).records;
  corpus.resize(800);
  auto w = data::table1_window();
  auto result = data::filter_window(corpus, w, 2);
  std::vector<std::string> expected;
  for (const auto &r: corpus) {
    if (brute_force_inside(r.mol, w))
      expected.push_back(r.id);
  }
  std::vector<std::string> got;
  for (const auto &r: result.kept)
    got.push_back(r.id);
  EXPECT_EQ(got, expected);

  auto again = data::filter_window(result.kept, w, 1);
  EXPECT_EQ(again.kept.size(), result.kept.size());

  auto a = data::keep_cations(data::filter_window(corpus, w).kept);
  auto b = data::filter_window(data::keep_cations(corpus), w).kept;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    EXPECT_EQ(a[i].id, b[i].id);
}

TEST(TokenizerTest, RoundTripAndLimits) {
  auto v = data::Vocabulary::build({ "C[S+](C)C", "ClCBr", "C%12CC%12" });
  EXPECT_GE(v.id("[S+]"), 3);
  EXPECT_GE(v.id("Cl"), 3);
  EXPECT_GE(v.id("Br"), 3);
  EXPECT_GE(v.id("%12"), 3);
  EXPECT_EQ(v.id("l"), -1);
  for (const char *s: { "C[S+](C)C", "ClCBr", "C%12CC%12" })
    EXPECT_EQ(v.decode(v.encode(s)), s);
  auto ids = v.encode("C[S+](C)C");
  EXPECT_EQ(ids.front(), data::Vocabulary::kStart);
  EXPECT_EQ(ids.back(), data::Vocabulary::kEnd);
  EXPECT_EQ(ids.size(), 8U);
  EXPECT_THROW(v.encode(std::string(129, 'C')), data::Overlength);
  EXPECT_NO_THROW(v.encode(std::string(128, 'C')));
  EXPECT_THROW(v.encode("CN"), data::OutOfVocabulary);
  EXPECT_EQ(data::Vocabulary::from_json(v.to_json()), v);
}

} // namespace
