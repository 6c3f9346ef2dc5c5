//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/adjudication/depict.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <numbers>

#include "pagforge/chem/aromaticity.h"
#include "pagforge/chem/element.h"
#include "pagforge/chem/rings.h"

namespace pagforge::adj {
namespace {

constexpr double kPi = std::numbers::pi;

Point operator+(Point a, Point b) { return { a.x + b.x, a.y + b.y }; }
Point operator-(Point a, Point b) { return { a.x - b.x, a.y - b.y }; }
Point operator*(double s, Point a) { return { s * a.x, s * a.y }; }
double norm(Point a) { return std::hypot(a.x, a.y); }
Point unit(Point a) {
  double n = norm(a);
  return n > 1e-12 ? (1.0 / n) * a : Point { 1.0, 0.0 };
}
Point polar(double r, double theta) { return { r * std::cos(theta), r * std::sin(theta) }; }
double angle(Point a) { return std::atan2(a.y, a.x); }

class Layout {
public:
  explicit Layout(const chem::Molecule &mol)
      : mol_(mol), pos_(mol.num_atoms()), placed_(mol.num_atoms(), false),
        turn_(mol.num_atoms(), 1) {
    info_ = chem::ring_stats(mol);
    atom_rings_.resize(mol.num_atoms());
    for (std::size_t r = 0; r < info_.rings.size(); ++r) {
      for (int a: info_.rings[r])
        atom_rings_[a].push_back(static_cast<int>(r));
    }
    ring_done_.assign(info_.rings.size(), false);
    in_ring_ = chem::ring_atoms(mol);
  }

  std::vector<Point> run() {
    double x_offset = 0.0;
    for (const auto &comp: mol_.components()) {
      place_component(comp.front());
      double lo = std::numeric_limits<double>::infinity(), hi = -lo, cy = 0.0;
      for (int a: comp) {
        lo = std::min(lo, pos_[a].x);
        hi = std::max(hi, pos_[a].x);
        cy += pos_[a].y;
      }
      cy /= static_cast<double>(comp.size());
      relax(comp);
      for (int a: comp)
        pos_[a] = pos_[a] + Point { x_offset - lo, -cy };
      x_offset += (hi - lo) + 1.5;
    }
    return pos_;
  }

private:
  void place_component(int start) {
    std::deque<int> queue;
    if (!atom_rings_[start].empty()) {
      place_ring(atom_rings_[start].front(), queue);
    } else {
      pos_[start] = { 0.0, 0.0 };
      placed_[start] = true;
      queue.push_back(start);
    }
    while (!queue.empty()) {
      int a = queue.front();
      queue.pop_front();
      for (int r: atom_rings_[a]) {
        if (!ring_done_[r])
          place_ring(r, queue);
      }
      expand_chain(a, queue);
    }
  }

  void mark(int atom, Point p, std::deque<int> &queue) {
    pos_[atom] = p;
    placed_[atom] = true;
    queue.push_back(atom);
  }

  Point placed_neighbor_centroid(int a, int skip1 = -1, int skip2 = -1) const {
    Point c;
    int n = 0;
    for (const auto &nb: mol_.neighbors(a)) {
      if (placed_[nb.atom] && nb.atom != skip1 && nb.atom != skip2) {
        c = c + pos_[nb.atom];
        ++n;
      }
    }
    return n ? (1.0 / n) * c : Point { std::nan(""), 0.0 };
  }

  void place_ring(int r, std::deque<int> &queue) {
    ring_done_[r] = true;
    const auto &ring = info_.rings[r];
    const int n = static_cast<int>(ring.size());
    const double step = 2.0 * kPi / n;
    const double radius = 1.0 / (2.0 * std::sin(kPi / n));
    int edge = -1, single = -1;
    for (int i = 0; i < n; ++i) {
      if (placed_[ring[i]]) {
        if (single < 0)
          single = i;
        if (placed_[ring[(i + 1) % n]]) {
          edge = i;
          break;
        }
      }
    }
    Point center;
    int anchor;
    double sign = 1.0;
    if (edge >= 0) {
      Point u = pos_[ring[edge]], v = pos_[ring[(edge + 1) % n]];
      Point mid = 0.5 * (u + v);
      Point nrm = unit({ -(v - u).y, (v - u).x });
      double apothem = norm(v - u) / (2.0 * std::tan(kPi / n));
      Point c1 = mid + apothem * nrm, c2 = mid - apothem * nrm;
      // Away from whatever already surrounds the shared edge.
      Point other;
      int count = 0;
      for (int a: { ring[edge], ring[(edge + 1) % n] }) {
        for (const auto &nb: mol_.neighbors(a)) {
          int b = nb.atom;
          if (placed_[b] && b != ring[edge] && b != ring[(edge + 1) % n]) {
            other = other + pos_[b];
            ++count;
          }
        }
      }
      if (count) {
        other = (1.0 / count) * other;
        center = norm(c1 - other) >= norm(c2 - other) ? c1 : c2;
      } else {
        center = c1;
      }
      Point du = u - center, dv = v - center;
      sign = du.x * dv.y - du.y * dv.x >= 0 ? 1.0 : -1.0;
      anchor = edge;
    } else if (single >= 0) {
      Point p = pos_[ring[single]];
      Point away = placed_neighbor_centroid(ring[single]);
      Point dir = std::isnan(away.x) ? Point { 1.0, 0.0 } : unit(p - away);
      center = p + radius * dir;
      anchor = single;
    } else {
      center = { 0.0, 0.0 };
      anchor = 0;
      pos_[ring[0]] = center + polar(radius, kPi / 2 + step / 2);
      placed_[ring[0]] = true;
      queue.push_back(ring[0]);
    }
    double theta0 = angle(pos_[ring[anchor]] - center);
    double r_eff = norm(pos_[ring[anchor]] - center);
    if (r_eff < 1e-9)
      r_eff = radius;
    for (int k = 1; k < n; ++k) {
      int a = ring[(anchor + k) % n];
      if (!placed_[a])
        mark(a, center + polar(r_eff, theta0 + sign * k * step), queue);
    }
  }

  bool linear_at(int a, int b) const {
    int triple = 0, dbl = 0;
    for (const auto &nb: mol_.neighbors(a)) {
      auto o = mol_.bond(nb.bond).order;
      triple += o == chem::BondOrder::kTriple;
      dbl += o == chem::BondOrder::kDouble;
    }
    (void)b;
    return triple > 0 || dbl >= 2;
  }

  void expand_chain(int a, std::deque<int> &queue) {
    std::vector<int> todo;
    for (const auto &nb: mol_.neighbors(a)) {
      if (!placed_[nb.atom])
        todo.push_back(nb.atom);
    }
    if (todo.empty())
      return;
    std::vector<int> done;
    for (const auto &nb: mol_.neighbors(a)) {
      if (placed_[nb.atom])
        done.push_back(nb.atom);
    }
    const int k = static_cast<int>(todo.size());
    std::vector<double> angles;
    if (done.empty()) {
      for (int i = 0; i < k; ++i)
        angles.push_back(-kPi / 6 + 2.0 * kPi * i / k);
    } else if (done.size() == 1 && !in_ring_[a]) {
      double back = angle(pos_[done[0]] - pos_[a]);
      if (k == 1 && linear_at(a, todo[0])) {
        angles.push_back(back + kPi);
      } else if (k == 1) {
        angles.push_back(back + turn_[a] * 2.0 * kPi / 3.0);
      } else {
        for (int i = 0; i < k; ++i)
          angles.push_back(back + 2.0 * kPi * (i + 1) / (k + 1));
      }
    } else {
      Point c;
      for (int b: done)
        c = c + pos_[b];
      c = (1.0 / static_cast<double>(done.size())) * c;
      double out = angle(pos_[a] - c);
      double spread = k == 1 ? 0.0 : kPi / 3.0;
      for (int i = 0; i < k; ++i)
        angles.push_back(out + (k == 1 ? 0.0 : spread * (i / static_cast<double>(k - 1) - 0.5)));
    }
    for (int i = 0; i < k; ++i) {
      int b = todo[i];
      turn_[b] = -turn_[a];
      mark(b, pos_[a] + polar(1.0, angles[i]), queue);
    }
  }

  void relax(const std::vector<int> &comp) {
    for (int round = 0; round < 40; ++round) {
      bool moved = false;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (std::size_t j = i + 1; j < comp.size(); ++j) {
          int a = comp[i], b = comp[j];
          if (mol_.bond_between(a, b) >= 0 || (in_ring_[a] && in_ring_[b]))
            continue;
          Point d = pos_[b] - pos_[a];
          double dist = norm(d);
          if (dist >= 0.6)
            continue;
          Point push = (0.5 * (0.6 - dist)) * (dist > 1e-9 ? unit(d) : Point { 0.0, 1.0 });
          if (!in_ring_[a])
            pos_[a] = pos_[a] - push;
          if (!in_ring_[b])
            pos_[b] = pos_[b] + push;
          moved = true;
        }
      }
      if (!moved)
        break;
    }
  }

  const chem::Molecule &mol_;
  chem::RingInfo info_;
  std::vector<std::vector<int>> atom_rings_;
  std::vector<bool> ring_done_;
  std::vector<bool> in_ring_;
  std::vector<Point> pos_;
  std::vector<bool> placed_;
  std::vector<int> turn_;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 0.005 ? 0.0 : v);
  return buf;
}

const char *color_of(int z) {
  switch (z) {
  case 7: return "#2342c8";
  case 8: return "#d02020";
  case 9:
  case 17: return "#1a8c1a";
  case 16: return "#b38600";
  case 35: return "#8b3a1a";
  case 53: return "#7a1fa2";
  default: return "#202020";
  }
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c: s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

std::vector<Point> layout_2d(const chem::Molecule &mol) {
  if (mol.empty())
    return {};
  return Layout(mol).run();
}

std::string depict_svg(const chem::Molecule &mol, const std::string &title) {
  constexpr double kScale = 40.0, kMargin = 30.0;
  chem::Molecule draw = mol;
  try {
    draw = chem::kekulize(mol);
  } catch (const std::exception &) {
    // Aromatic bonds fall back to a dashed inner line.
  }
  auto pos = layout_2d(mol);
  double minx = 0, maxx = 0, miny = 0, maxy = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i == 0 || pos[i].x < minx) minx = pos[i].x;
    if (i == 0 || pos[i].x > maxx) maxx = pos[i].x;
    if (i == 0 || pos[i].y < miny) miny = pos[i].y;
    if (i == 0 || pos[i].y > maxy) maxy = pos[i].y;
  }
  double width = (maxx - minx) * kScale + 2 * kMargin;
  double height = (maxy - miny) * kScale + 2 * kMargin;
  auto px = [&](Point p) {
    return Point { (p.x - minx) * kScale + kMargin, (maxy - p.y) * kScale + kMargin };
  };
  auto info = chem::ring_stats(mol);
  std::vector<Point> ring_center_of_bond(mol.num_bonds(), Point { std::nan(""), 0 });
  for (const auto &ring: info.rings) {
    Point c;
    for (int a: ring)
      c = c + pos[a];
    c = (1.0 / static_cast<double>(ring.size())) * c;
    for (std::size_t i = 0; i < ring.size(); ++i) {
      int b = mol.bond_between(ring[i], ring[(i + 1) % ring.size()]);
      if (b >= 0 && std::isnan(ring_center_of_bond[b].x))
        ring_center_of_bond[b] = c;
    }
  }

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  if (!title.empty())
    out += "<title>" + escape(title) + "</title>\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  out += "<g stroke=\"#202020\" stroke-width=\"2\" stroke-linecap=\"round\">\n";
  auto line = [&](Point a, Point b, const char *extra = "") {
    Point pa = px(a), pb = px(b);
    out += "<line x1=\"" + fmt(pa.x) + "\" y1=\"" + fmt(pa.y) + "\" x2=\"" + fmt(pb.x) +
           "\" y2=\"" + fmt(pb.y) + "\"" + extra + "/>\n";
  };
  for (int bi = 0; bi < draw.num_bonds(); ++bi) {
    const auto &b = draw.bond(bi);
    Point a = pos[b.a], c = pos[b.b];
    line(a, c);
    Point d = unit(c - a);
    Point nrm { -d.y, d.x };
    bool second = b.order == chem::BondOrder::kDouble || b.order == chem::BondOrder::kAromatic;
    const char *style = b.order == chem::BondOrder::kAromatic ? " stroke-dasharray=\"4 3\"" : "";
    if (second) {
      Point rc = ring_center_of_bond[bi];
      if (!std::isnan(rc.x)) {
        Point mid = 0.5 * (a + c);
        Point toward = (nrm.x * (rc - mid).x + nrm.y * (rc - mid).y) >= 0 ? nrm : -1.0 * nrm;
        line(a + 0.18 * toward + 0.15 * d, c + 0.18 * toward - 0.15 * d, style);
      } else {
        line(a + 0.12 * nrm, c + 0.12 * nrm, style);
        line(a - 0.06 * nrm, c - 0.06 * nrm);
      }
    } else if (b.order == chem::BondOrder::kTriple) {
      line(a + 0.14 * nrm, c + 0.14 * nrm);
      line(a - 0.14 * nrm, c - 0.14 * nrm);
    }
  }
  out += "</g>\n<g font-family=\"sans-serif\" font-size=\"16\" text-anchor=\"middle\">\n";
  for (int i = 0; i < mol.num_atoms(); ++i) {
    const auto &atom = mol.atom(i);
    bool label = atom.element != 6 || atom.formal_charge != 0 || mol.degree(i) == 0;
    if (!label)
      continue;
    Point p = px(pos[i]);
    std::string text(chem::element(atom.element).symbol);
    if (atom.hydrogens > 0)
      text += atom.hydrogens > 1 ? "H" + std::to_string(atom.hydrogens) : "H";
    out += "<circle cx=\"" + fmt(p.x) + "\" cy=\"" + fmt(p.y) +
           "\" r=\"11\" fill=\"#ffffff\" stroke=\"none\"/>\n";
    out += "<text x=\"" + fmt(p.x) + "\" y=\"" + fmt(p.y + 6) + "\" fill=\"" +
           color_of(atom.element) + "\">" + text;
    if (atom.formal_charge != 0) {
      int q = std::abs(atom.formal_charge);
      std::string sign = (q > 1 ? std::to_string(q) : std::string()) +
                         (atom.formal_charge > 0 ? "+" : "-");
      out += "<tspan baseline-shift=\"super\" font-size=\"11\">" + sign + "</tspan>";
    }
    out += "</text>\n";
  }
  out += "</g>\n</svg>\n";
  return out;
}

} // namespace pagforge::adj
