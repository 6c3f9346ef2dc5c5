//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/screening/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/smiles.h"
#include "pagforge/screening/filters.h"
#include "pagforge/screening/fragments.h"
#include "pagforge/util/error.h"
#include "pagforge/util/parallel.h"
#include "pagforge/util/rng.h"

namespace pagforge::screen {

int bin_count(double width) {
  if (!(width > 0.0 && width <= 1.0))
    throw InvalidArgument("bin width must lie in (0, 1]");
  return static_cast<int>(std::ceil(1.0 / width - 1e-9));
}

int bin_of(double v, double width) {
  int n = bin_count(width);
  int k = static_cast<int>(std::floor(v / width + 1e-9));
  return std::clamp(k, 0, n - 1);
}

nlohmann::json BinningResult::report() const {
  return { { "members_per_bin", members_per_bin },
           { "selected_per_bin", selected_per_bin },
           { "selected", selected.size() },
           { "exact_matches", exact_matches } };
}

BinningResult similarity_binning(const std::vector<desc::Fingerprint> &generated,
                                 const std::vector<desc::Fingerprint> &reference,
                                 const BinningConfig &config) {
  if (reference.empty())
    throw InvalidArgument("similarity binning needs a non-empty reference set");
  if (config.cap < 0)
    throw InvalidArgument("bin cap must be non-negative");
  int nbins = bin_count(config.bin_width);

  BinningResult r;
  r.max_similarity.assign(generated.size(), 0.0);
  parallel_for(generated.size(), [&](std::size_t i) {
    double best = 0.0;
    for (const auto &ref: reference)
      best = std::max(best, desc::similarity(generated[i], ref, config.kind));
    r.max_similarity[i] = best;
  });

  std::vector<std::vector<int>> members(nbins);
  r.bin.assign(generated.size(), -1);
  for (std::size_t i = 0; i < generated.size(); ++i) {
    if (r.max_similarity[i] >= 1.0) {
      ++r.exact_matches;
      continue;
    }
    int b = bin_of(r.max_similarity[i], config.bin_width);
    r.bin[i] = b;
    members[b].push_back(static_cast<int>(i));
  }

  r.members_per_bin.assign(nbins, 0);
  r.selected_per_bin.assign(nbins, 0);
  for (int b = 0; b < nbins; ++b) {
    auto &m = members[b];
    r.members_per_bin[b] = static_cast<int>(m.size());
    if (static_cast<int>(m.size()) > config.cap) {
      Rng rng(config.seed, static_cast<std::uint64_t>(b));
      shuffle(m, rng);
      m.resize(config.cap);
      std::sort(m.begin(), m.end());
    }
    r.selected_per_bin[b] = static_cast<int>(m.size());
    r.selected.insert(r.selected.end(), m.begin(), m.end());
  }
  return r;
}

std::string DiceHistogram::csv() const {
  std::ostringstream out;
  out << "bin_low,bin_high,count\n";
  char buf[96];
  for (std::size_t k = 0; k < counts.size(); ++k) {
    double lo = k * bin_width;
    double hi = std::min(1.0, (k + 1) * bin_width);
    std::snprintf(buf, sizeof buf, "%.4f,%.4f,%ld\n", lo, hi, counts[k]);
    out << buf;
  }
  return out.str();
}

DiceHistogram dice_histogram(const std::vector<desc::Fingerprint> &fps,
                             double bin_width, int threads) {
  if (fps.size() < 2)
    throw InvalidArgument("dice histogram needs at least two molecules");
  int nbins = bin_count(bin_width);
  std::size_t n = fps.size();
  std::vector<std::vector<long>> rows(n, std::vector<long>(nbins, 0));
  parallel_for(
      n,
      [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j)
          ++rows[i][bin_of(desc::dice_distance(fps[i], fps[j]), bin_width)];
      },
      threads > 0 ? threads : default_threads());

  DiceHistogram h;
  h.bin_width = bin_width;
  h.counts.assign(nbins, 0);
  for (const auto &row: rows) {
    for (int b = 0; b < nbins; ++b)
      h.counts[b] += row[b];
  }
  for (int b = 0; b < nbins; ++b) {
    h.total += h.counts[b];
    if (h.counts[b] > h.counts[h.mode_bin])
      h.mode_bin = b;
  }
  return h;
}

std::vector<std::string> scaffolds_of(const chem::Molecule &mol) {
  std::set<std::string> out;
  for (const auto &frag: brics_fragments(mol)) {
    chem::Molecule scaffold = murcko_scaffold(frag);
    if (!scaffold.empty())
      out.insert(chem::canonical_smiles(scaffold));
  }
  return { out.begin(), out.end() };
}

namespace {

struct ScaffoldIndex {
  std::map<std::string, std::vector<std::string>> parents;
  int molecules = 0;
};

ScaffoldIndex index_scaffolds(const std::vector<chem::Molecule> &mols) {
  std::vector<std::vector<std::string>> per(mols.size());
  parallel_for(mols.size(),
               [&](std::size_t i) { per[i] = scaffolds_of(mols[i]); });
  ScaffoldIndex idx;
  idx.molecules = static_cast<int>(mols.size());
  for (std::size_t i = 0; i < mols.size(); ++i) {
    std::string id = mols[i].id() ? *mols[i].id() : std::to_string(i);
    for (const auto &s: per[i])
      idx.parents[s].push_back(id);
  }
  return idx;
}

bool sulfonium_scaffold(const std::string &smiles) {
  return has_sulfonium_center(chem::parse_smiles(smiles));
}

ScaffoldColumn column(const ScaffoldIndex &idx) {
  ScaffoldColumn c;
  c.molecules = idx.molecules;
  c.all_scaffolds = static_cast<int>(idx.parents.size());
  for (const auto &[s, p]: idx.parents)
    c.sulfonium_scaffolds += sulfonium_scaffold(s);
  return c;
}

} // namespace

ScaffoldSummary scaffold_summary(const std::vector<chem::Molecule> &generated,
                                 const std::vector<chem::Molecule> &reference) {
  auto gen = index_scaffolds(generated);
  auto ref = index_scaffolds(reference);
  ScaffoldSummary s;
  s.generated = column(gen);
  s.reference = column(ref);
  for (const auto &[scaffold, parents]: gen.parents) {
    ScaffoldRecord rec;
    rec.scaffold = scaffold;
    rec.parents = parents;
    rec.is_sulfonium = sulfonium_scaffold(scaffold);
    rec.is_novel = rec.is_sulfonium && !ref.parents.count(scaffold);
    s.novel_sulfonium_scaffolds += rec.is_novel;
    s.records.push_back(std::move(rec));
  }
  return s;
}

std::string ScaffoldSummary::table() const {
  char buf[160];
  std::ostringstream out;
  std::snprintf(buf, sizeof buf, "%-27s %10s %10s\n", "", "Reference",
                "Generated");
  out << buf;
  auto row = [&](const char *name, const std::string &r, int g) {
    std::snprintf(buf, sizeof buf, "%-27s %10s %10d\n", name, r.c_str(), g);
    out << buf;
  };
  row("Sulfonium cations", std::to_string(reference.molecules),
      generated.molecules);
  row("All scaffolds", std::to_string(reference.all_scaffolds),
      generated.all_scaffolds);
  row("Sulfonium scaffolds", std::to_string(reference.sulfonium_scaffolds),
      generated.sulfonium_scaffolds);
  row("Novel sulfonium scaffolds", "--", novel_sulfonium_scaffolds);
  return out.str();
}

nlohmann::json ScaffoldSummary::to_json() const {
  auto col = [](const ScaffoldColumn &c) {
    return nlohmann::json { { "molecules", c.molecules },
                            { "all_scaffolds", c.all_scaffolds },
                            { "sulfonium_scaffolds", c.sulfonium_scaffolds } };
  };
  nlohmann::json j { { "reference", col(reference) },
                     { "generated", col(generated) },
                     { "novel_sulfonium_scaffolds", novel_sulfonium_scaffolds } };
  j["scaffolds"] = nlohmann::json::array();
  for (const auto &r: records)
    j["scaffolds"].push_back({ { "scaffold", r.scaffold },
                               { "parents", r.parents },
                               { "is_sulfonium", r.is_sulfonium },
                               { "is_novel", r.is_novel } });
  return j;
}

} // namespace pagforge::screen
