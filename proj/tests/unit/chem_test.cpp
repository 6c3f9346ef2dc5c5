//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pagforge/chem/aromaticity.h"
#include "pagforge/chem/canonical.h"
#include "pagforge/chem/element.h"
#include "pagforge/chem/molecule.h"
#include "pagforge/chem/rings.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/util/error.h"
#include "pagforge/util/rng.h"

namespace pagforge::chem {
namespace {

// Independent ring oracle: enumerate every simple cycle by DFS over bond
// sets, then greedily build a GF(2) basis shortest-first.
struct BruteRings {
  int count = 0;
  int max_size = 0;
};

BruteRings brute_force_rings(const Molecule &mol) {
  int m = mol.num_bonds();
  std::set<std::vector<bool>> cycles;
  std::vector<bool> used(m, false);
  std::vector<bool> on_path(mol.num_atoms(), false);

  std::function<void(int, int, int)> dfs = [&](int start, int u, int depth) {
    for (const Neighbor &nb: mol.neighbors(u)) {
      if (used[nb.bond])
        continue;
      if (nb.atom == start && depth >= 2) {
        used[nb.bond] = true;
        cycles.insert(used);
        used[nb.bond] = false;
        continue;
      }
      if (on_path[nb.atom])
        continue;
      used[nb.bond] = true;
      on_path[nb.atom] = true;
      dfs(start, nb.atom, depth + 1);
      on_path[nb.atom] = false;
      used[nb.bond] = false;
    }
  };
  for (int s = 0; s < mol.num_atoms(); ++s) {
    on_path[s] = true;
    dfs(s, s, 0);
    on_path[s] = false;
  }

  std::vector<std::vector<bool>> sorted(cycles.begin(), cycles.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto &l, const auto &r) {
    return std::count(l.begin(), l.end(), true) < std::count(r.begin(), r.end(), true);
  });

  BruteRings out;
  std::vector<std::vector<bool>> basis;
  for (auto row: sorted) {
    int size = static_cast<int>(std::count(row.begin(), row.end(), true));
    auto reduce = row;
    // Full elimination against the basis in row-echelon form.
    for (const auto &b: basis) {
      int pivot = static_cast<int>(std::find(b.begin(), b.end(), true) - b.begin());
      if (reduce[pivot]) {
        for (int k = 0; k < m; ++k)
          reduce[k] = reduce[k] != b[k];
      }
    }
    if (std::find(reduce.begin(), reduce.end(), true) == reduce.end())
      continue;
    basis.push_back(reduce);
    // Keep echelon form: sort basis by pivot.
    std::sort(basis.begin(), basis.end(), [](const auto &l, const auto &r) {
      return std::find(l.begin(), l.end(), true) - l.begin()
             < std::find(r.begin(), r.end(), true) - r.begin();
    });
    // Re-reduce so each pivot column is unique.
    for (std::size_t i = 0; i < basis.size(); ++i) {
      int p = static_cast<int>(std::find(basis[i].begin(), basis[i].end(), true) - basis[i].begin());
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if (j != i && basis[j][p]) {
          for (int k = 0; k < m; ++k)
            basis[j][k] = basis[j][k] != basis[i][k];
        }
      }
    }
    ++out.count;
    out.max_size = std::max(out.max_size, size);
  }
  return out;
}

TEST(SmilesParseTest, Trimethylsulfonium) {
  Molecule m = parse_smiles("C[S+](C)C");
  ASSERT_EQ(m.num_atoms(), 4);
  int s = -1;
  for (int i = 0; i < m.num_atoms(); ++i) {
    if (m.atom(i).element == kSulfur)
      s = i;
  }
  ASSERT_GE(s, 0);
  EXPECT_EQ(m.atom(s).formal_charge, 1);
  EXPECT_EQ(m.degree(s), 3);
  EXPECT_EQ(m.atom(s).hydrogens, 0);
  EXPECT_EQ(m.atom(0).hydrogens, 3);
}

TEST(SmilesParseTest, Benzene) {
  Molecule m = parse_smiles("c1ccccc1");
  ASSERT_EQ(m.num_atoms(), 6);
  for (const Atom &a: m.atoms()) {
    EXPECT_TRUE(a.aromatic);
    EXPECT_EQ(a.hydrogens, 1);
  }
  for (const Bond &b: m.bonds())
    EXPECT_EQ(b.order, BondOrder::kAromatic);
  RingInfo info = ring_stats(m);
  EXPECT_EQ(info.ring_count, 1);
  EXPECT_EQ(info.max_ring_size, 6);
}

TEST(SmilesParseTest, KekuleBenzeneIsPerceivedAromatic) {
  Molecule m = parse_smiles("C1=CC=CC=C1");
  for (const Atom &a: m.atoms())
    EXPECT_TRUE(a.aromatic);
  EXPECT_EQ(canonical_smiles(m), canonical_smiles(parse_smiles("c1ccccc1")));
}

TEST(SmilesParseTest, Errors) {
  auto kind_of = [](const char *s) {
    try {
      parse_smiles(s);
    } catch (const SmilesError &e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error for " << s;
    return SmilesError::Kind::kSyntax;
  };
  EXPECT_EQ(kind_of("C1CC"), SmilesError::Kind::kUnclosedRing);
  EXPECT_EQ(kind_of("C[S+"), SmilesError::Kind::kUnmatchedBracket);
  EXPECT_EQ(kind_of("CC]"), SmilesError::Kind::kUnmatchedBracket);
  EXPECT_EQ(kind_of("C[Xx]C"), SmilesError::Kind::kUnknownElement);
  EXPECT_EQ(kind_of("CXC"), SmilesError::Kind::kUnknownElement);
  EXPECT_EQ(kind_of("C(C)(C)(C)(C)C"), SmilesError::Kind::kValence);
  EXPECT_EQ(kind_of("FF(F)"), SmilesError::Kind::kValence);
  EXPECT_EQ(kind_of("c1cccc1"), SmilesError::Kind::kKekulize);
  EXPECT_EQ(kind_of("C(C"), SmilesError::Kind::kUnmatchedBranch);
  EXPECT_EQ(kind_of("CC)"), SmilesError::Kind::kUnmatchedBranch);
  EXPECT_EQ(kind_of(""), SmilesError::Kind::kSyntax);
  EXPECT_EQ(kind_of("C=1CC-1"), SmilesError::Kind::kSyntax);
}

TEST(SmilesParseTest, BracketDetails) {
  Molecule m = parse_smiles("[NH4+]");
  EXPECT_EQ(m.atom(0).hydrogens, 4);
  EXPECT_EQ(m.atom(0).formal_charge, 1);

  m = parse_smiles("[O-2]");
  EXPECT_EQ(m.atom(0).formal_charge, -2);
  m = parse_smiles("[O--]");
  EXPECT_EQ(m.atom(0).formal_charge, -2);

  m = parse_smiles("c1cc[nH]c1");
  EXPECT_EQ(m.num_atoms(), 5);
  for (const Atom &a: m.atoms())
    EXPECT_TRUE(a.aromatic);

  // Percent ring closures and explicit hydrogens folded into the neighbour.
  m = parse_smiles("C%12CC%12");
  EXPECT_EQ(ring_stats(m).ring_count, 1);
  m = parse_smiles("[H]C([H])([H])[H]");
  ASSERT_EQ(m.num_atoms(), 1);
  EXPECT_EQ(m.atom(0).hydrogens, 4);

  // Stereo and isotopes are accepted and discarded.
  EXPECT_EQ(canonical_smiles(parse_smiles("F/C=C/F")),
            canonical_smiles(parse_smiles("FC=CF")));
  EXPECT_EQ(canonical_smiles(parse_smiles("[13CH3][C@@H](O)Cl")),
            canonical_smiles(parse_smiles("CC(O)Cl")));
}

TEST(RingStatsTest, NaphthaleneMatchesBruteForce) {
  Molecule m = parse_smiles("c1ccc2ccccc2c1");
  BruteRings oracle = brute_force_rings(m);
  EXPECT_EQ(oracle.count, 2);
  EXPECT_EQ(oracle.max_size, 6);
  RingInfo info = ring_stats(m);
  EXPECT_EQ(info.ring_count, oracle.count);
  EXPECT_EQ(info.max_ring_size, oracle.max_size);
}

TEST(RingStatsTest, Acyclic) {
  RingInfo info = ring_stats(parse_smiles("CCCC"));
  EXPECT_EQ(info.ring_count, 0);
  EXPECT_EQ(info.max_ring_size, 0);
  EXPECT_TRUE(info.rings.empty());
}

TEST(RingStatsTest, PolycyclesMatchBruteForce) {
  for (const char *s: { "C1CC2CCC1C2", "C12C3C4C1C5C2C3C45", "c1ccc2c(c1)ccc1ccccc12",
                        "C1CCC2(CC1)CCCC2", "C1CC1C1CCC1", "c1ccc(cc1)[S+](c1ccccc1)c1ccccc1",
                        "C1CC2CC3CCC2CC3C1" }) {
    Molecule m = parse_smiles(s);
    BruteRings oracle = brute_force_rings(m);
    RingInfo info = ring_stats(m);
    EXPECT_EQ(info.ring_count, oracle.count) << s;
    EXPECT_EQ(info.max_ring_size, oracle.max_size) << s;
  }
}

TEST(NetChargeTest, Examples) {
  EXPECT_EQ(net_charge(parse_smiles("C[S+](C)C")), 1);
  EXPECT_EQ(net_charge(parse_smiles("c1ccccc1")), 0);
  Molecule salt = parse_smiles("[NH4+].[Cl-]");
  EXPECT_EQ(net_charge(salt), 0);
  auto parts = component_charges(salt);
  std::sort(parts.begin(), parts.end());
  EXPECT_EQ(parts, (std::vector<int> { -1, 1 }));
}

TEST(CanonicalTest, RespellingsAgree) {
  EXPECT_EQ(canonical_smiles(parse_smiles("OCC")), canonical_smiles(parse_smiles("CCO")));
  EXPECT_EQ(canonical_smiles(parse_smiles("C[S+](C)c1ccccc1")),
            canonical_smiles(parse_smiles("c1cccc(c1)[S+](C)C")));
  EXPECT_EQ(canonical_smiles(parse_smiles("n1ccccc1")),
            canonical_smiles(parse_smiles("C1=CC=NC=C1")));
  EXPECT_EQ(canonical_smiles(parse_smiles("c1ccc2ccccc2c1")),
            canonical_smiles(parse_smiles("C1=CC2=CC=CC=C2C=C1")));
}

TEST(CanonicalTest, FixedPointAndPermutationInvariance) {
  const char *corpus[] = {
    "C[S+](C)C", "c1ccc(cc1)[S+](c1ccccc1)c1ccccc1", "O=C(Oc1ccccc1)C[S+]1CCCC1",
    "c1ccc2c(c1)sc1ccccc12", "Cc1ccc(cc1)S(=O)(=O)[O-]", "C[N+](C)(C)Cc1ccccc1",
    "O=c1cccc[nH]1", "c1cc[nH]c1", "Cn1cc[n+](C)c1", "CC(C)(C)c1ccc([S+](c2ccccc2)c2ccccc2)cc1",
    "FC(F)(F)C(F)(F)[S+](C)C", "C1CC2CCC1C2", "c1ccc2ccccc2c1", "C#CC[S+](C)C",
    "[O-][N+](=O)c1ccccc1", "C1=CC=CC=CC=C1", "c1ccc(-c2ccccc2)cc1", "OC(=O)C=CC(=O)O",
    "c1ccc2c(c1)-c1ccccc1-2", "C[Si](C)(C)C", "Brc1cccs1", "c1ccoc1", "C[s+]1cccc1",
  };
  Rng rng(7);
  for (const char *s: corpus) {
    Molecule m = parse_smiles(s);
    std::string canon = canonical_smiles(m);
    EXPECT_EQ(canonical_smiles(parse_smiles(canon)), canon) << s;
    EXPECT_EQ(write_smiles(m).empty(), false);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> order(m.num_atoms());
      std::iota(order.begin(), order.end(), 0);
      shuffle(order, rng);
      Molecule p = m.permuted(order);
      EXPECT_EQ(canonical_smiles(p), canon) << s;
      // Re-emitting in the permuted order and re-parsing is also stable.
      EXPECT_EQ(canonical_smiles(parse_smiles(write_smiles(p))), canon) << s;
    }
    // Kekulé and aromatic spellings canonicalize identically.
    EXPECT_EQ(canonical_smiles(parse_smiles(write_kekule_smiles(m))), canon) << s;
  }
}

TEST(AromaticityTest, Perception) {
  auto aromatic_count = [](const char *s) {
    Molecule m = parse_smiles(s);
    return std::count_if(m.atoms().begin(), m.atoms().end(),
                         [](const Atom &a) { return a.aromatic; });
  };
  EXPECT_EQ(aromatic_count("C1=CC=CC=C1"), 6);
  EXPECT_EQ(aromatic_count("C1=CCC=C1"), 0);
  EXPECT_EQ(aromatic_count("C1=CC=CC=CC=C1"), 0);  // 8-ring outside the rule
  EXPECT_EQ(aromatic_count("O=C1C=CC(=O)C=C1"), 0);
  EXPECT_EQ(aromatic_count("c1ccc2[nH]ccc2c1"), 9);
  EXPECT_EQ(aromatic_count("c1ccsc1"), 5);
  EXPECT_EQ(aromatic_count("C[S+]1C=CC=C1"), 0);  // pyramidal onium centre
  EXPECT_EQ(aromatic_count("c1cc[n+](C)cc1"), 6);
}

TEST(AromaticityTest, KekulizeAssignsAlternation) {
  Molecule m = kekulize(parse_smiles("c1ccccc1"));
  int doubles = 0;
  for (const Bond &b: m.bonds()) {
    EXPECT_NE(b.order, BondOrder::kAromatic);
    doubles += b.order == BondOrder::kDouble;
  }
  EXPECT_EQ(doubles, 3);
}

TEST(ElementTest, ChargedValences) {
  EXPECT_EQ(allowed_valences(kSulfur, 1), (std::vector<int> { 3, 5 }));
  EXPECT_EQ(allowed_valences(kNitrogen, 1), (std::vector<int> { 4 }));
  EXPECT_EQ(allowed_valences(kOxygen, -1), (std::vector<int> { 1 }));
  EXPECT_EQ(find_element("Xx"), nullptr);
  EXPECT_THROW(element(92), InvalidArgument);
}

} // namespace
} // namespace pagforge::chem
