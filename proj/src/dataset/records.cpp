//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/dataset/records.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "pagforge/chem/canonical.h"
#include "pagforge/chem/smiles.h"

namespace pagforge::data {
namespace {

std::string trim(const std::string &s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
    out.push_back(trim(field));
  if (!line.empty() && line.back() == ',')
    out.emplace_back();
  return out;
}

bool parse_double(const std::string &s, double &out) {
  const char *end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

} // namespace

nlohmann::json IngestReport::to_json() const {
  nlohmann::json j;
  j["path"] = path;
  j["lines"] = lines;
  j["records"] = records;
  j["skipped"] = nlohmann::json::array();
  for (const auto &s: skipped)
    j["skipped"].push_back({ { "line", s.line }, { "text", s.text },
                             { "reason", s.reason } });
  j["duplicates"] = nlohmann::json::array();
  for (const auto &d: duplicates)
    j["duplicates"].push_back({ { "line", d.line },
                                { "first_line", d.first_line },
                                { "canonical", d.canonical } });
  return j;
}

IngestResult ingest_text(const std::string &text, const IngestOptions &options,
                         const std::string &name) {
  IngestResult result;
  result.report.path = name;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool csv = false;
  std::unordered_map<std::string, int> first_seen;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty())
      continue;
    if (lineno == 1 && line.rfind("smiles,", 0) == 0) {
      csv = true;
      continue;
    }
    ++result.report.lines;

    Record rec;
    rec.line = lineno;
    auto fail = [&](const std::string &reason) {
      if (options.strict)
        throw IngestError(lineno, reason);
      result.report.skipped.push_back({ lineno, line, reason });
    };

    if (csv) {
      auto fields = split_csv(line);
      if (fields.empty() || fields.size() > 3) {
        fail("expected 'smiles,id,lumo_ev' fields");
        continue;
      }
      rec.smiles = fields[0];
      if (fields.size() > 1)
        rec.id = fields[1];
      if (fields.size() > 2 && !fields[2].empty()) {
        double v = 0.0;
        if (!parse_double(fields[2], v)) {
          fail("invalid lumo_ev '" + fields[2] + "'");
          continue;
        }
        rec.lumo_ev = v;
      }
    } else {
      auto sep = line.find_first_of(" \t");
      rec.smiles = line.substr(0, sep);
      if (sep != std::string::npos)
        rec.id = trim(line.substr(sep));
    }
    if (rec.id.empty())
      rec.id = "L" + std::to_string(lineno);

    try {
      rec.mol = chem::parse_smiles(rec.smiles);
    } catch (const SmilesError &e) {
      fail(std::string("unparseable SMILES: ") + e.what());
      continue;
    }
    rec.mol.set_id(rec.id);

    std::string canonical = chem::canonical_smiles(rec.mol);
    auto [it, fresh] = first_seen.emplace(canonical, lineno);
    if (!fresh)
      result.report.duplicates.push_back({ lineno, it->second, canonical });
    result.records.push_back(std::move(rec));
  }
  result.report.records = static_cast<int>(result.records.size());
  return result;
}

IngestResult ingest(const std::filesystem::path &path,
                    const IngestOptions &options) {
  std::ifstream in(path);
  if (!in)
    throw NotFoundError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return ingest_text(buf.str(), options, path.string());
}

bool is_monocation(const chem::Molecule &mol) {
  return !mol.empty() && mol.components().size() == 1
         && chem::net_charge(mol) == 1;
}

std::vector<Record> keep_cations(const std::vector<Record> &records) {
  std::vector<Record> out;
  for (const auto &r: records) {
    if (is_monocation(r.mol))
      out.push_back(r);
  }
  return out;
}

std::vector<int> label_lumo(const std::vector<Record> &records,
                            double threshold_ev) {
  std::vector<int> labels;
  labels.reserve(records.size());
  for (const auto &r: records) {
    if (!r.lumo_ev)
      throw InvalidArgument("record '" + r.id + "' has no lumo_ev");
    labels.push_back(*r.lumo_ev <= threshold_ev ? 1 : 0);
  }
  return labels;
}

void write_smiles_file(const std::filesystem::path &path,
                       const std::vector<Record> &records) {
  std::ofstream out(path);
  if (!out)
    throw Error("cannot write " + path.string());
  for (const auto &r: records)
    out << r.smiles << '\t' << r.id << '\n';
}

} // namespace pagforge::data
