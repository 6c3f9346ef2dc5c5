//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/smiles.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>

#include "pagforge/chem/aromaticity.h"
#include "pagforge/chem/element.h"
#include "pagforge/util/error.h"

namespace pagforge::chem {
namespace {

using Kind = SmilesError::Kind;

struct RingOpen {
  int atom;
  std::optional<BondOrder> order;
  std::size_t pos;
};

class Parser {
public:
  explicit Parser(std::string_view text): s_(text) { }

  Molecule run() {
    if (s_.empty())
      throw SmilesError(Kind::kSyntax, 0, "empty SMILES");

    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '(') {
        if (prev_ < 0 || pending_)
          fail(Kind::kSyntax, "branch without a preceding atom");
        branches_.push_back({ prev_, i_ });
        ++i_;
      } else if (c == ')') {
        if (branches_.empty())
          fail(Kind::kUnmatchedBranch, "unmatched ')'");
        if (pending_)
          fail(Kind::kSyntax, "dangling bond before ')'");
        prev_ = branches_.back().first;
        branches_.pop_back();
        ++i_;
      } else if (c == '-' || c == '=' || c == '#' || c == ':' || c == '/'
                 || c == '\\') {
        if (pending_ || prev_ < 0)
          fail(Kind::kSyntax, "unexpected bond symbol");
        pending_ = bond_symbol(c);
        ++i_;
      } else if (c == '.') {
        if (pending_ || prev_ < 0)
          fail(Kind::kSyntax, "unexpected '.'");
        prev_ = -1;
        ++i_;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        ring_bond(c - '0');
        ++i_;
      } else if (c == '%') {
        if (i_ + 2 >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))
            || !std::isdigit(static_cast<unsigned char>(s_[i_ + 2])))
          fail(Kind::kSyntax, "malformed %nn ring closure");
        ring_bond((s_[i_ + 1] - '0') * 10 + (s_[i_ + 2] - '0'));
        i_ += 3;
      } else if (c == '[') {
        bracket_atom();
      } else if (c == ']') {
        fail(Kind::kUnmatchedBracket, "unmatched ']'");
      } else {
        organic_atom();
      }
    }

    if (!rings_.empty()) {
      throw SmilesError(Kind::kUnclosedRing, rings_.begin()->second.pos,
                        "unclosed ring bond " + std::to_string(rings_.begin()->first));
    }
    if (!branches_.empty())
      throw SmilesError(Kind::kUnmatchedBranch, branches_.back().second,
                        "unclosed branch");
    if (pending_)
      fail(Kind::kSyntax, "dangling bond at end of input");

    return finish();
  }

private:
  [[noreturn]] void fail(Kind kind, const std::string &what) const {
    throw SmilesError(kind, i_, what);
  }

  static BondOrder bond_symbol(char c) {
    switch (c) {
    case '=':
      return BondOrder::kDouble;
    case '#':
      return BondOrder::kTriple;
    case ':':
      return BondOrder::kAromatic;
    default:
      return BondOrder::kSingle;
    }
  }

  BondOrder default_order(int a, int b) const {
    return mol_.atom(a).aromatic && mol_.atom(b).aromatic ? BondOrder::kAromatic
                                                          : BondOrder::kSingle;
  }

  void connect(int a, int b, std::optional<BondOrder> order) {
    if (mol_.bond_between(a, b) >= 0)
      fail(Kind::kSyntax, "duplicate bond");
    if (a == b)
      fail(Kind::kSyntax, "ring closure to the same atom");
    mol_.add_bond(a, b, order.value_or(default_order(a, b)));
  }

  void add_atom(Atom atom, bool bracket) {
    int idx = mol_.add_atom(atom);
    bracket_.push_back(bracket);
    if (prev_ >= 0)
      connect(prev_, idx, pending_);
    pending_.reset();
    prev_ = idx;
  }

  void ring_bond(int digit) {
    if (prev_ < 0)
      fail(Kind::kSyntax, "ring closure without a preceding atom");
    auto it = rings_.find(digit);
    if (it == rings_.end()) {
      rings_[digit] = { prev_, pending_, i_ };
    } else {
      std::optional<BondOrder> order = it->second.order;
      if (pending_) {
        if (order && *order != *pending_)
          fail(Kind::kSyntax, "conflicting ring closure bond orders");
        order = pending_;
      }
      connect(it->second.atom, prev_, order);
      rings_.erase(it);
    }
    pending_.reset();
  }

  void organic_atom() {
    char c = s_[i_];
    Atom atom;
    if (c == 'C' && i_ + 1 < s_.size() && s_[i_ + 1] == 'l') {
      atom.element = kChlorine;
      i_ += 2;
    } else if (c == 'B' && i_ + 1 < s_.size() && s_[i_ + 1] == 'r') {
      atom.element = kBromine;
      i_ += 2;
    } else {
      switch (c) {
      case 'B':
        atom.element = kBoron;
        break;
      case 'C':
        atom.element = kCarbon;
        break;
      case 'N':
        atom.element = kNitrogen;
        break;
      case 'O':
        atom.element = kOxygen;
        break;
      case 'P':
        atom.element = kPhosphorus;
        break;
      case 'S':
        atom.element = kSulfur;
        break;
      case 'F':
        atom.element = kFluorine;
        break;
      case 'I':
        atom.element = kIodine;
        break;
      case 'b':
        atom.element = kBoron;
        atom.aromatic = true;
        break;
      case 'c':
        atom.element = kCarbon;
        atom.aromatic = true;
        break;
      case 'n':
        atom.element = kNitrogen;
        atom.aromatic = true;
        break;
      case 'o':
        atom.element = kOxygen;
        atom.aromatic = true;
        break;
      case 'p':
        atom.element = kPhosphorus;
        atom.aromatic = true;
        break;
      case 's':
        atom.element = kSulfur;
        atom.aromatic = true;
        break;
      default:
        if (std::isalpha(static_cast<unsigned char>(c)))
          fail(Kind::kUnknownElement,
               std::string("unknown element '") + c + "' outside brackets");
        fail(Kind::kSyntax, std::string("unexpected character '") + c + "'");
      }
      ++i_;
    }
    add_atom(atom, false);
  }

  void bracket_atom() {
    std::size_t open = i_++;
    auto at_end = [&] { return i_ >= s_.size(); };
    auto unmatched = [&] {
      throw SmilesError(Kind::kUnmatchedBracket, open, "unmatched '['");
    };

    while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_])))
      ++i_;  // isotope, discarded
    if (at_end())
      unmatched();

    Atom atom;
    std::size_t sym_start = i_;
    if (std::islower(static_cast<unsigned char>(s_[i_]))) {
      // Aromatic symbols: two-letter forms first.
      if (s_.compare(i_, 2, "se") == 0) {
        atom.element = 34;
        i_ += 2;
      } else if (s_.compare(i_, 2, "as") == 0) {
        atom.element = 33;
        i_ += 2;
      } else {
        std::string up(1, static_cast<char>(std::toupper(s_[i_])));
        const Element *e = find_element(up);
        if (e == nullptr || std::string_view("bcnops").find(s_[i_]) == std::string_view::npos)
          fail(Kind::kUnknownElement, "unknown aromatic element");
        atom.element = e->z;
        ++i_;
      }
      atom.aromatic = true;
    } else if (std::isupper(static_cast<unsigned char>(s_[i_]))) {
      const Element *e = nullptr;
      if (i_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[i_ + 1])))
        e = find_element(s_.substr(i_, 2));
      if (e != nullptr) {
        i_ += 2;
      } else {
        e = find_element(s_.substr(i_, 1));
        if (e == nullptr) {
          std::size_t len = 1;
          if (i_ + 1 < s_.size() && std::islower(static_cast<unsigned char>(s_[i_ + 1])))
            len = 2;
          throw SmilesError(Kind::kUnknownElement, sym_start,
                            "unknown element '" + std::string(s_.substr(i_, len)) + "'");
        }
        ++i_;
      }
      atom.element = e->z;
    } else if (s_[i_] == ']') {
      fail(Kind::kSyntax, "empty bracket atom");
    } else {
      fail(Kind::kUnknownElement, "unknown element in bracket");
    }

    // Chirality, discarded.
    while (!at_end() && s_[i_] == '@')
      ++i_;
    if (i_ > sym_start && s_[i_ - 1] == '@' && i_ + 1 < s_.size()) {
      static constexpr std::string_view kClasses[] = { "TH", "AL", "SP", "TB", "OH" };
      for (auto cls: kClasses) {
        if (s_.compare(i_, 2, cls) == 0) {
          i_ += 2;
          while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_])))
            ++i_;
          break;
        }
      }
    }

    if (!at_end() && s_[i_] == 'H') {
      ++i_;
      int h = 1;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        h = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_])))
          h = h * 10 + (s_[i_++] - '0');
      }
      atom.hydrogens = h;
    }

    if (!at_end() && (s_[i_] == '+' || s_[i_] == '-')) {
      char sign = s_[i_++];
      int mag = 1;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
        mag = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_])))
          mag = mag * 10 + (s_[i_++] - '0');
      } else {
        while (!at_end() && s_[i_] == sign) {
          ++mag;
          ++i_;
        }
      }
      atom.formal_charge = sign == '+' ? mag : -mag;
    }

    if (!at_end() && s_[i_] == ':') {
      ++i_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_])))
        ++i_;
    }

    if (at_end())
      unmatched();
    if (s_[i_] != ']')
      fail(Kind::kSyntax, "unexpected character in bracket atom");
    ++i_;
    add_atom(atom, true);
  }

  Molecule finish() {
    int n = mol_.num_atoms();
    for (int i = 0; i < n; ++i) {
      if (bracket_[i])
        continue;
      Atom &a = mol_.atom(i);
      int h = default_hydrogens(a.element, a.aromatic, mol_.bond_order_sum(i));
      if (h < 0)
        throw SmilesError(Kind::kValence, 0,
                          "valence violation on atom " + std::to_string(i));
      a.hydrogens = h;
    }

    // Fold explicit hydrogen atoms into their heavy neighbour.
    std::vector<bool> drop(n, false);
    for (int i = 0; i < n; ++i) {
      const Atom &a = mol_.atom(i);
      if (a.element != kHydrogen || a.formal_charge != 0 || a.hydrogens != 0
          || mol_.degree(i) != 1)
        continue;
      const Neighbor &nb = mol_.neighbors(i).front();
      if (mol_.atom(nb.atom).element == kHydrogen
          || mol_.bond(nb.bond).order != BondOrder::kSingle)
        continue;
      drop[i] = true;
      mol_.atom(nb.atom).hydrogens += 1;
    }
    Molecule mol;
    if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
      std::vector<int> keep;
      for (int i = 0; i < n; ++i) {
        if (!drop[i])
          keep.push_back(i);
      }
      mol = mol_.subgraph(keep);
    } else {
      mol = std::move(mol_);
    }

    Molecule kek;
    try {
      kek = kekulize(mol);
    } catch (const KekulizeError &e) {
      throw SmilesError(Kind::kKekulize, 0, e.what());
    }

    for (int i = 0; i < kek.num_atoms(); ++i) {
      const Atom &a = kek.atom(i);
      int total = kek.bond_order_sum(i) + a.hydrogens;
      auto valences = allowed_valences(a.element, a.formal_charge);
      if (total > valences.back())
        throw SmilesError(Kind::kValence, 0,
                          "valence violation on atom " + std::to_string(i));
    }

    perceive_aromaticity(kek);
    return kek;
  }

  std::string_view s_;
  std::size_t i_ = 0;
  Molecule mol_;
  std::vector<bool> bracket_;
  int prev_ = -1;
  std::optional<BondOrder> pending_;
  std::vector<std::pair<int, std::size_t>> branches_;
  std::map<int, RingOpen> rings_;
};

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

std::string atom_token(const Molecule &mol, int i) {
  const Atom &a = mol.atom(i);
  const Element &e = element(a.element);
  std::string sym(e.symbol);
  if (a.aromatic)
    sym[0] = lower(sym[0]);

  if (a.formal_charge == 0 && in_organic_subset(a.element, a.aromatic)
      && default_hydrogens(a.element, a.aromatic, mol.bond_order_sum(i))
             == a.hydrogens)
    return sym;

  std::string out = "[" + sym;
  if (a.hydrogens > 0) {
    out += 'H';
    if (a.hydrogens > 1)
      out += std::to_string(a.hydrogens);
  }
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? '+' : '-';
    int mag = std::abs(a.formal_charge);
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
  return out;
}

std::string bond_token(const Molecule &mol, const Bond &b) {
  switch (b.order) {
  case BondOrder::kAromatic:
    return "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kSingle:
    return mol.atom(b.a).aromatic && mol.atom(b.b).aromatic ? "-" : "";
  }
  return "";
}

std::string ring_label(int d) {
  if (d < 10)
    return std::to_string(d);
  return "%" + std::to_string(d);
}

class Writer {
public:
  Writer(const Molecule &mol, const std::vector<int> &ranks)
      : mol_(mol), ranks_(ranks), visited_(mol.num_atoms(), false),
        bond_seen_(mol.num_bonds(), false), children_(mol.num_atoms()),
        ring_bonds_(mol.num_atoms()) { }

  std::string component(int start) {
    build(start, -1);
    std::string out;
    emit(start, out);
    return out;
  }

private:
  std::vector<Neighbor> sorted_neighbors(int a) const {
    auto nbrs = mol_.neighbors(a);
    std::sort(nbrs.begin(), nbrs.end(), [&](const Neighbor &l, const Neighbor &r) {
      return ranks_[l.atom] < ranks_[r.atom];
    });
    return nbrs;
  }

  void build(int a, int parent_bond) {
    visited_[a] = true;
    if (parent_bond >= 0)
      bond_seen_[parent_bond] = true;
    for (const Neighbor &nb: sorted_neighbors(a)) {
      if (bond_seen_[nb.bond])
        continue;
      if (visited_[nb.atom]) {
        bond_seen_[nb.bond] = true;
        ring_bonds_[nb.atom].push_back(nb.bond);
        ring_bonds_[a].push_back(nb.bond);
        continue;
      }
      children_[a].push_back(nb);
      build(nb.atom, nb.bond);
    }
  }

  void emit(int a, std::string &out) {
    out += atom_token(mol_, a);

    // Ring bonds: closures of already-open digits first, then openings,
    // each by partner rank.
    auto rbonds = ring_bonds_[a];
    std::sort(rbonds.begin(), rbonds.end(), [&](int l, int r) {
      return ranks_[mol_.bond(l).other(a)] < ranks_[mol_.bond(r).other(a)];
    });
    for (int bi: rbonds) {
      auto it = open_.find(bi);
      if (it == open_.end())
        continue;
      out += ring_label(it->second);
      free_digit(it->second);
      open_.erase(it);
    }
    for (int bi: rbonds) {
      if (closed_.count(bi) || open_.count(bi))
        continue;
      int d = alloc_digit();
      open_[bi] = d;
      closed_.insert(bi);
      out += bond_token(mol_, mol_.bond(bi));
      out += ring_label(d);
    }

    const auto &kids = children_[a];
    for (std::size_t k = 0; k < kids.size(); ++k) {
      bool branch = k + 1 < kids.size();
      if (branch)
        out += '(';
      out += bond_token(mol_, mol_.bond(kids[k].bond));
      emit(kids[k].atom, out);
      if (branch)
        out += ')';
    }
  }

  int alloc_digit() {
    for (int d = 1;; ++d) {
      if (!used_.count(d)) {
        used_.insert(d);
        return d;
      }
    }
  }

  void free_digit(int d) { used_.erase(d); }

  const Molecule &mol_;
  const std::vector<int> &ranks_;
  std::vector<bool> visited_;
  std::vector<bool> bond_seen_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> ring_bonds_;
  std::map<int, int> open_;
  std::set<int> closed_;
  std::set<int> used_;
};

} // namespace

Molecule parse_smiles(std::string_view text) {
  return Parser(text).run();
}

bool in_organic_subset(int z, bool aromatic) {
  switch (z) {
  case kBoron:
  case kCarbon:
  case kNitrogen:
  case kOxygen:
  case kPhosphorus:
  case kSulfur:
    return true;
  case kFluorine:
  case kChlorine:
  case kBromine:
  case kIodine:
    return !aromatic;
  default:
    return false;
  }
}

int default_hydrogens(int z, bool aromatic, int bond_sum) {
  auto valences = allowed_valences(z, 0);
  if (bond_sum > valences.back())
    return -1;
  for (int v: valences) {
    if (v >= bond_sum) {
      int used = aromatic ? bond_sum + 1 : bond_sum;
      return std::max(0, v - used);
    }
  }
  return 0;
}

std::string write_smiles(const Molecule &mol, const std::vector<int> &ranks) {
  std::vector<std::string> parts;
  for (const auto &comp: mol.components()) {
    int start = *std::min_element(comp.begin(), comp.end(),
                                  [&](int l, int r) { return ranks[l] < ranks[r]; });
    parts.push_back(Writer(mol, ranks).component(start));
  }
  // Components in order of their starting rank.
  std::vector<std::pair<int, std::size_t>> order;
  auto comps = mol.components();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    int best = ranks[comps[c][0]];
    for (int i: comps[c])
      best = std::min(best, ranks[i]);
    order.emplace_back(best, c);
  }
  std::sort(order.begin(), order.end());
  std::string out;
  for (const auto &[rank, c]: order) {
    if (!out.empty())
      out += '.';
    out += parts[c];
  }
  return out;
}

std::string write_smiles(const Molecule &mol) {
  std::vector<int> ranks(mol.num_atoms());
  std::iota(ranks.begin(), ranks.end(), 0);
  return write_smiles(mol, ranks);
}

std::string write_kekule_smiles(const Molecule &mol) {
  return write_smiles(kekulize(mol));
}

} // namespace pagforge::chem
