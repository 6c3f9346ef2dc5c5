//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Builds the synthetic-accessibility fragment table from a SMILES corpus.
// Each radius-0..2 environment is counted once per molecule. Fragments are
// ranked by frequency; the threshold is the frequency of the fragment at
// which the cumulative count first covers 80% of all occurrences, and each
// fragment scores log10(count / threshold).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pagforge/chem/smiles.h"
#include "pagforge/descriptors/fingerprint.h"

int main(int argc, char **argv) {
  CLI::App app { "Build the SA fragment contribution table" };
  std::string input;
  std::string output;
  double coverage = 0.8;
  app.add_option("input", input, "SMILES file (one per line, optional id)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("-o,--output", output, "Output table")->required();
  app.add_option("--coverage", coverage, "Occurrence coverage of the threshold");
  CLI11_PARSE(app, argc, argv);

  std::ifstream in(input);
  std::map<std::uint64_t, long> counts;
  std::string line;
  long molecules = 0;
  long skipped = 0;
  while (std::getline(in, line)) {
    auto end = line.find_first_of("\t ");
    std::string smiles = line.substr(0, end);
    if (smiles.empty())
      continue;
    try {
      auto mol = pagforge::chem::parse_smiles(smiles);
      auto envs = pagforge::desc::morgan_environments(mol, 2);
      for (auto id: std::set<std::uint64_t>(envs.begin(), envs.end()))
        ++counts[id];
      ++molecules;
    } catch (const std::exception &) {
      ++skipped;
    }
  }

  std::vector<std::pair<long, std::uint64_t>> ranked;
  long total = 0;
  for (auto [id, n]: counts) {
    ranked.emplace_back(n, id);
    total += n;
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto &l, const auto &r) {
    return l.first != r.first ? l.first > r.first : l.second < r.second;
  });
  long threshold = 1;
  long running = 0;
  for (auto [n, id]: ranked) {
    running += n;
    if (running >= coverage * total) {
      threshold = n;
      break;
    }
  }

  std::ofstream out(output);
  out << "# SA fragment contributions: <environment id> <log10(count/"
      << threshold << ")>\n";
  out << "# molecules " << molecules << ", fragments " << ranked.size()
      << ", skipped " << skipped << "\n";
  std::sort(ranked.begin(), ranked.end(),
            [](const auto &l, const auto &r) { return l.second < r.second; });
  char buf[64];
  for (auto [n, id]: ranked) {
    std::snprintf(buf, sizeof buf, "%.4f",
                  std::log10(static_cast<double>(n) / threshold));
    out << id << ' ' << buf << '\n';
  }
  std::cerr << "wrote " << ranked.size() << " fragments from " << molecules
            << " molecules (threshold " << threshold << ")\n";
  return 0;
}
