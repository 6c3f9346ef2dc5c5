//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/dataset/window.h"

#include "pagforge/chem/element.h"
#include "pagforge/util/parallel.h"

namespace pagforge::data {
namespace {

Range range_from(const nlohmann::json &j, const char *key) {
  if (!j.contains(key))
    throw InvalidArgument(std::string("window lacks '") + key + "'");
  const auto &r = j.at(key);
  Range out { r.at("min").get<double>(), r.at("max").get<double>() };
  if (out.min > out.max)
    throw InvalidArgument(std::string("window '") + key + "' has min > max");
  return out;
}

} // namespace

PropertyWindow PropertyWindow::from_json(const nlohmann::json &j) {
  PropertyWindow w;
  w.num_atoms = range_from(j, "num_atoms");
  w.logp = range_from(j, "logp");
  w.sa = range_from(j, "sa");
  w.mw = range_from(j, "mw");
  w.ring_count = range_from(j, "ring_count");
  w.max_ring_size = range_from(j, "max_ring_size");
  if (!j.contains("elements"))
    throw InvalidArgument("window lacks 'elements'");
  for (const auto &e: j.at("elements")) {
    auto sym = e.get<std::string>();
    if (!chem::find_element(sym))
      throw InvalidArgument("window lists unknown element '" + sym + "'");
    w.elements.insert(sym);
  }
  return w;
}

nlohmann::json PropertyWindow::to_json() const {
  auto r = [](const Range &x) {
    return nlohmann::json { { "min", x.min }, { "max", x.max } };
  };
  return { { "num_atoms", r(num_atoms) }, { "logp", r(logp) },
           { "sa", r(sa) }, { "mw", r(mw) }, { "ring_count", r(ring_count) },
           { "max_ring_size", r(max_ring_size) },
           { "elements", std::vector<std::string>(elements.begin(),
                                                  elements.end()) } };
}

PropertyWindow table1_window() {
  PropertyWindow w;
  w.num_atoms = { 4, 79 };
  w.logp = { -5.68, 23.73 };
  w.sa = { 1.82, 7.91 };
  w.mw = { 58.10, 984.18 };
  w.ring_count = { 0, 12 };
  w.max_ring_size = { 0, 6 };
  w.elements = { "Br", "C", "Cl", "F", "I", "N", "O", "S", "Si" };
  return w;
}

std::vector<std::string> window_violations(const chem::Molecule &mol,
                                           const desc::DescriptorVector &d,
                                           const PropertyWindow &window) {
  std::vector<std::string> out;
  if (!window.num_atoms.contains(d.num_atoms))
    out.emplace_back("num_atoms");
  if (!window.logp.contains(d.logp))
    out.emplace_back("logp");
  if (!window.sa.contains(d.sa))
    out.emplace_back("sa");
  if (!window.mw.contains(d.mw))
    out.emplace_back("mw");
  if (!window.ring_count.contains(d.ring_count))
    out.emplace_back("ring_count");
  if (!window.max_ring_size.contains(d.max_ring_size))
    out.emplace_back("max_ring_size");
  for (const auto &a: mol.atoms()) {
    if (a.element == chem::kHydrogen)
      continue;
    if (!window.elements.count(std::string(chem::element(a.element).symbol))) {
      out.emplace_back("elements");
      break;
    }
  }
  return out;
}

nlohmann::json WindowResult::report() const {
  nlohmann::json j;
  j["kept"] = kept.size();
  j["dropped"] = dropped;
  j["drops_per_rule"] = drops_per_rule;
  return j;
}

WindowResult filter_window(const std::vector<Record> &records,
                           const PropertyWindow &window, int threads) {
  std::vector<desc::DescriptorVector> descs(records.size());
  std::vector<std::vector<std::string>> verdicts(records.size());
  parallel_for(
      records.size(),
      [&](std::size_t i) {
        descs[i] = desc::compute_descriptors(records[i].mol);
        verdicts[i] = window_violations(records[i].mol, descs[i], window);
      },
      threads > 0 ? threads : default_threads());

  WindowResult result;
  for (const auto &rule: window_rules())
    result.drops_per_rule[rule] = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (verdicts[i].empty()) {
      result.kept.push_back(records[i]);
      result.kept_descriptors.push_back(descs[i]);
      continue;
    }
    ++result.dropped;
    for (const auto &rule: verdicts[i])
      ++result.drops_per_rule[rule];
  }
  return result;
}

} // namespace pagforge::data
