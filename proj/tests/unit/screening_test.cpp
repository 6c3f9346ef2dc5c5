//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/screening/analysis.h"
#include "pagforge/screening/filters.h"
#include "pagforge/screening/fragments.h"
#include "pagforge/util/error.h"
#include "pagforge/util/rng.h"

namespace {

using namespace pagforge;
using chem::canonical_smiles;
using chem::parse_smiles;

std::string can(const std::string &s) { return canonical_smiles(parse_smiles(s)); }

std::vector<std::string> rules_for(const std::string &smiles,
                                   std::unordered_set<std::string> training = {}) {
  auto v = screen::chem_filters({ { "x", smiles } }, training);
  return v.at(0).failed_rules;
}

TEST(FilterTest, Examples) {
  EXPECT_TRUE(rules_for("C[S+](C)C").empty());
  auto amine = rules_for("CC[S+](C)C.CCN");
  EXPECT_NE(std::find(amine.begin(), amine.end(), "contains_amine"), amine.end());
  EXPECT_EQ(rules_for("FC(F)(F)C(F)(F)[S+](C)C"),
            (std::vector<std::string> { "fluorine_rich" }));
  EXPECT_EQ(rules_for("c1ccccc1"), (std::vector<std::string> { "not_sulfonium" }));
  EXPECT_EQ(rules_for("C1CC"), (std::vector<std::string> { "invalid_smiles" }));
  EXPECT_EQ(rules_for("C[S+](C)C", { can("C[S+](C)C") }),
            (std::vector<std::string> { "exact_match_training" }));
}

TEST(FilterTest, AmineDefinition) {
  EXPECT_TRUE(screen::has_amine(parse_smiles("CCN(CC)CC")));
  EXPECT_FALSE(screen::has_amine(parse_smiles("CC(=O)NC")));    // amide
  EXPECT_FALSE(screen::has_amine(parse_smiles("c1ccncc1")));    // aromatic
  EXPECT_FALSE(screen::has_amine(parse_smiles("c1cc[nH]c1")));  // aromatic
  EXPECT_FALSE(screen::has_amine(parse_smiles("C[NH3+]")));     // charged
  EXPECT_FALSE(screen::has_amine(parse_smiles("CC=NC")));       // imine
}

TEST(FilterTest, SulfoniumDefinition) {
  EXPECT_TRUE(screen::has_sulfonium(parse_smiles("c1ccc([S+](c2ccccc2)c2ccccc2)cc1")));
  EXPECT_FALSE(screen::has_sulfonium(parse_smiles("C[SH+]C")));
  EXPECT_FALSE(screen::has_sulfonium(parse_smiles("CS(C)=O")));
  EXPECT_FALSE(screen::has_sulfonium(parse_smiles("C[S+]=C")));
  EXPECT_TRUE(screen::has_sulfonium_center(parse_smiles("C[SH+]C")));
}

TEST(FilterTest, IdempotentAndOrderIndependent) {
  std::vector<screen::Candidate> cands {
    { "a", "C[S+](C)C" }, { "b", "CCN" }, { "c", "CC[S+]1CCCC1" },
    { "d", "FC(F)(F)[S+](C)C" }, { "e", "x" },
  };
  auto v = screen::chem_filters(cands, {});
  std::vector<screen::Candidate> passed;
  for (const auto &x: v) {
    if (x.passed)
      passed.push_back({ x.id, x.smiles });
  }
  auto again = screen::chem_filters(passed, {});
  for (const auto &x: again)
    EXPECT_TRUE(x.passed);
  std::vector<screen::Candidate> reversed(cands.rbegin(), cands.rend());
  auto rv = screen::chem_filters(reversed, {});
  for (std::size_t i = 0; i < v.size(); ++i)
    EXPECT_EQ(v[i].failed_rules, rv[v.size() - 1 - i].failed_rules);
}

TEST(BricsTest, NoCleavableBond) {
  auto frags = screen::brics_fragment_smiles(parse_smiles("CC"));
  EXPECT_EQ(frags, (std::vector<std::string> { can("CC") }));
}

TEST(BricsTest, EsterTrace) {
  // C(=O)-O: L1-L3; O-CH2: L3-L4; C(=O)-c: L6-L16.
  auto frags = screen::brics_fragment_smiles(parse_smiles("CCOC(=O)c1ccccc1"));
  std::set<std::string> expected { can("CC"), can("O"), can("C=O"),
                                   can("c1ccccc1") };
  EXPECT_EQ(std::set<std::string>(frags.begin(), frags.end()), expected);
}

TEST(BricsTest, ArylThioetherNextToSulfonium) {
  auto mol = parse_smiles("C[S+](C)c1ccc(Sc2ccccc2)cc1");
  auto frags = screen::brics_fragment_smiles(mol);
  std::set<std::string> expected { can("c1ccccc1"), can("S"),
                                   can("C[S+](C)c1ccccc1") };
  EXPECT_EQ(std::set<std::string>(frags.begin(), frags.end()), expected);
  // The sulfonium S has three neighbours, so no environment matches it.
  EXPECT_TRUE(screen::brics_labels(mol, 1).empty());
}

TEST(BricsTest, PermutationInvariant) {
  auto mol = parse_smiles("CC(=O)Nc1ccc(OCC[S+](C)c2ccccc2)cc1");
  auto base = screen::brics_fragment_smiles(mol);
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    std::vector<int> order(mol.num_atoms());
    for (int i = 0; i < mol.num_atoms(); ++i)
      order[i] = i;
    shuffle(order, rng);
    EXPECT_EQ(screen::brics_fragment_smiles(mol.permuted(order)), base);
  }
}

TEST(MurckoTest, Examples) {
  EXPECT_EQ(canonical_smiles(screen::murcko_scaffold(parse_smiles("c1ccccc1"))),
            can("c1ccccc1"));
  EXPECT_EQ(canonical_smiles(screen::murcko_scaffold(parse_smiles("CCc1ccccc1"))),
            can("c1ccccc1"));
  EXPECT_TRUE(screen::murcko_scaffold(parse_smiles("CCCC[S+](C)C")).empty());
  EXPECT_EQ(canonical_smiles(screen::murcko_scaffold(
                parse_smiles("C[S+](c1ccccc1)c1ccc(C)cc1"))),
            can("c1ccc([SH+]c2ccccc2)cc1"));
  EXPECT_EQ(canonical_smiles(screen::murcko_scaffold(parse_smiles("C[S+]1CCCC1"))),
            can("[SH+]1CCCC1"));
  // Exocyclic carbonyl on an aromatic ring: scaffold stays valid.
  auto pyridone = screen::murcko_scaffold(parse_smiles("O=c1cccc[nH]1"));
  EXPECT_EQ(canonical_smiles(pyridone),
            canonical_smiles(parse_smiles(canonical_smiles(pyridone))));
}

TEST(MurckoTest, Idempotent) {
  for (const char *s: { "CCc1ccc(CC(=O)c2ccccc2)cc1", "C[S+]1c2ccccc2-c2ccccc21",
                        "CC(C)(C)c1ccc([S+](c2ccccc2)c2ccccc2)cc1",
                        "O=C1CCCC1CCN" }) {
    auto once = screen::murcko_scaffold(parse_smiles(s));
    auto twice = screen::murcko_scaffold(once);
    EXPECT_EQ(canonical_smiles(once), canonical_smiles(twice)) << s;
  }
}

std::vector<chem::Molecule> mols(const std::vector<std::string> &smiles) {
  std::vector<chem::Molecule> out;
  int i = 0;
  for (const auto &s: smiles) {
    out.push_back(parse_smiles(s));
    out.back().set_id("m" + std::to_string(i++));
  }
  return out;
}

TEST(ScaffoldSummaryTest, ToySet) {
  auto gen = mols({ "C[S+]1CCCC1", "CC[S+]1CCCC1", "CCC[S+]1CCCC1",
                    "C[S+](c1ccccc1)c1ccccc1", "CC[S+](c1ccccc1)c1ccccc1" });
  auto ref = mols({ "C[S+]1CCCC1" });
  auto s = screen::scaffold_summary(gen, ref);
  EXPECT_EQ(s.generated.molecules, 5);
  EXPECT_EQ(s.generated.all_scaffolds, 2);
  EXPECT_EQ(s.generated.sulfonium_scaffolds, 2);
  EXPECT_EQ(s.novel_sulfonium_scaffolds, 1);
  EXPECT_NE(s.table().find("Novel sulfonium scaffolds"), std::string::npos);

  auto same = screen::scaffold_summary(gen, gen);
  EXPECT_EQ(same.novel_sulfonium_scaffolds, 0);
  EXPECT_EQ(screen::scaffold_summary(gen, ref).to_json(), s.to_json());
}

desc::Fingerprint bits(std::initializer_list<std::pair<int, int>> ranges) {
  desc::Fingerprint fp(1 << 16);
  for (auto [lo, hi]: ranges) {
    for (int b = lo; b < hi; ++b)
      fp.set(b);
  }
  return fp;
}

TEST(BinningTest, CapAndSeed) {
  std::vector<desc::Fingerprint> ref { bits({ { 0, 100 } }) };
  std::vector<desc::Fingerprint> gen;
  for (int i = 0; i < 250; ++i)
    gen.push_back(bits({ { 0, 50 }, { 1000 + 50 * i, 1050 + 50 * i } }));
  screen::BinningConfig cfg { 0.1, 100, 42, desc::SimilarityKind::kDice };
  auto a = screen::similarity_binning(gen, ref, cfg);
  EXPECT_DOUBLE_EQ(a.max_similarity[0], 0.5);
  EXPECT_EQ(a.members_per_bin[5], 250);
  EXPECT_EQ(a.selected.size(), 100U);
  EXPECT_EQ(a.selected_per_bin[0], 0);
  auto b = screen::similarity_binning(gen, ref, cfg);
  EXPECT_EQ(a.selected, b.selected);
  cfg.seed = 43;
  EXPECT_NE(screen::similarity_binning(gen, ref, cfg).selected, a.selected);
  std::set<int> unique(a.selected.begin(), a.selected.end());
  EXPECT_EQ(unique.size(), 100U);
}

TEST(BinningTest, ExactMatchesExcluded) {
  std::vector<desc::Fingerprint> set { bits({ { 0, 10 } }), bits({ { 20, 40 } }) };
  auto r = screen::similarity_binning(set, set, {});
  EXPECT_EQ(r.exact_matches, 2);
  EXPECT_TRUE(r.selected.empty());
  EXPECT_THROW(screen::similarity_binning(set, {}, {}), InvalidArgument);
}

TEST(DiceHistogramTest, Conservation) {
  auto fp = bits({ { 0, 30 } });
  auto two = screen::dice_histogram({ fp, fp });
  EXPECT_EQ(two.total, 1);
  EXPECT_EQ(two.counts[0], 1);
  EXPECT_EQ(two.mode_bin, 0);

  std::vector<desc::Fingerprint> set(6, fp);
  set.push_back(bits({ { 100, 130 } }));
  auto h = screen::dice_histogram(set, 0.05, 2);
  EXPECT_EQ(h.total, 7 * 6 / 2);
  EXPECT_EQ(h.counts[0], 15);
  EXPECT_EQ(h.counts.back(), 6);
  EXPECT_EQ(h.mode_bin, 0);
  EXPECT_EQ(h.counts.size(), 20U);
  EXPECT_EQ(h.csv().substr(0, 24), "bin_low,bin_high,count\n0");
  EXPECT_THROW(screen::dice_histogram({ fp }), InvalidArgument);
}

} // namespace
