//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/chem/rings.h"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>

namespace pagforge::chem {
namespace {

using BitRow = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<int> atoms;  // cycle order
  std::vector<int> sorted;
  BitRow edges;
};

// BFS shortest-path tree from root; parents chosen by smallest index so the
// tree is a function of the graph and its numbering only.
void bfs_tree(const Molecule &mol, int root, std::vector<int> &dist,
              std::vector<int> &parent) {
  int n = mol.num_atoms();
  dist.assign(n, -1);
  parent.assign(n, -1);
  std::queue<int> q;
  dist[root] = 0;
  q.push(root);
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    std::vector<int> nbrs;
    for (const Neighbor &nb: mol.neighbors(u))
      nbrs.push_back(nb.atom);
    std::sort(nbrs.begin(), nbrs.end());
    for (int v: nbrs) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        parent[v] = u;
        q.push(v);
      }
    }
  }
}

std::vector<int> path_to_root(int v, const std::vector<int> &parent) {
  std::vector<int> path;
  for (int x = v; x >= 0; x = parent[x])
    path.push_back(x);
  return path;  // v ... root
}

} // namespace

std::vector<bool> ring_bonds(const Molecule &mol) {
  // Tarjan bridge finding; non-bridges are ring bonds.
  int n = mol.num_atoms();
  std::vector<int> disc(n, -1), low(n, 0);
  std::vector<bool> in_ring(mol.num_bonds(), true);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };

  for (int s = 0; s < n; ++s) {
    if (disc[s] >= 0)
      continue;
    std::vector<Frame> stack { { s, -1, 0 } };
    disc[s] = low[s] = timer++;
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto &nbrs = mol.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        const Neighbor &nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
      } else {
        Frame done = f;
        stack.pop_back();
        if (!stack.empty()) {
          int p = stack.back().atom;
          low[p] = std::min(low[p], low[done.atom]);
          if (low[done.atom] > disc[p])
            in_ring[done.parent_bond] = false;
        }
      }
    }
  }
  return in_ring;
}

std::vector<bool> ring_atoms(const Molecule &mol) {
  auto rb = ring_bonds(mol);
  std::vector<bool> out(mol.num_atoms(), false);
  for (int i = 0; i < mol.num_bonds(); ++i) {
    if (rb[i]) {
      out[mol.bond(i).a] = true;
      out[mol.bond(i).b] = true;
    }
  }
  return out;
}

RingInfo ring_stats(const Molecule &mol) {
  RingInfo info;
  int n = mol.num_atoms();
  int m = mol.num_bonds();
  int cyclomatic = m - n + static_cast<int>(mol.components().size());
  if (cyclomatic <= 0)
    return info;

  auto in_ring = ring_bonds(mol);
  std::size_t words = (m + 63) / 64;

  std::vector<Candidate> cands;
  std::vector<int> dist, parent;
  for (int root = 0; root < n; ++root) {
    bfs_tree(mol, root, dist, parent);
    for (int bi = 0; bi < m; ++bi) {
      if (!in_ring[bi])
        continue;
      const Bond &b = mol.bond(bi);
      if (dist[b.a] < 0 || dist[b.b] < 0)
        continue;
      auto pa = path_to_root(b.a, parent);
      auto pb = path_to_root(b.b, parent);
      // Paths must meet only at the root.
      std::vector<int> sa(pa.begin(), pa.end() - 1), sb(pb.begin(), pb.end() - 1);
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      std::vector<int> common;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(),
                            std::back_inserter(common));
      if (!common.empty())
        continue;
      if (std::find(pa.begin(), pa.end() - 1, b.b) != pa.end() - 1
          || std::find(pb.begin(), pb.end() - 1, b.a) != pb.end() - 1)
        continue;

      Candidate c;
      // cycle: root ... a, b ... root
      c.atoms.assign(pa.rbegin(), pa.rend());
      for (std::size_t i = 0; i + 1 < pb.size(); ++i)
        c.atoms.push_back(pb[i]);
      if (c.atoms.size() < 3)
        continue;
      c.sorted = c.atoms;
      std::sort(c.sorted.begin(), c.sorted.end());
      if (std::adjacent_find(c.sorted.begin(), c.sorted.end()) != c.sorted.end())
        continue;
      c.edges.assign(words, 0);
      for (std::size_t i = 0; i < c.atoms.size(); ++i) {
        int x = c.atoms[i], y = c.atoms[(i + 1) % c.atoms.size()];
        int e = mol.bond_between(x, y);
        c.edges[e / 64] |= (1ULL << (e % 64));
      }
      cands.push_back(std::move(c));
    }
  }

  std::sort(cands.begin(), cands.end(),
            [](const Candidate &l, const Candidate &r) {
              if (l.atoms.size() != r.atoms.size())
                return l.atoms.size() < r.atoms.size();
              return l.sorted < r.sorted;
            });

  // Incremental GF(2) elimination: keep a reduced basis with pivot columns.
  std::vector<BitRow> basis;
  std::vector<int> pivots;
  for (const Candidate &c: cands) {
    if (static_cast<int>(info.rings.size()) == cyclomatic)
      break;
    BitRow row = c.edges;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      int p = pivots[k];
      if (row[p / 64] >> (p % 64) & 1ULL) {
        for (std::size_t w = 0; w < words; ++w)
          row[w] ^= basis[k][w];
      }
    }
    int pivot = -1;
    for (std::size_t w = 0; w < words && pivot < 0; ++w) {
      if (row[w])
        pivot = static_cast<int>(w * 64 + __builtin_ctzll(row[w]));
    }
    if (pivot < 0)
      continue;
    basis.push_back(row);
    pivots.push_back(pivot);
    info.rings.push_back(c.atoms);
  }

  info.ring_count = static_cast<int>(info.rings.size());
  for (const auto &r: info.rings)
    info.max_ring_size = std::max(info.max_ring_size, static_cast<int>(r.size()));
  return info;
}

std::vector<std::vector<int>> simple_cycles(const Molecule &mol, int max_size) {
  std::vector<std::vector<int>> out;
  int n = mol.num_atoms();
  std::vector<int> path;
  std::vector<bool> on_path(n, false);

  std::function<void(int, int)> dfs = [&](int start, int u) {
    for (const Neighbor &nb: mol.neighbors(u)) {
      int v = nb.atom;
      if (v == start && path.size() >= 3) {
        // Each cycle is found in both directions; keep one.
        if (path[1] < path.back())
          out.push_back(path);
        continue;
      }
      if (v <= start || on_path[v] || static_cast<int>(path.size()) >= max_size)
        continue;
      on_path[v] = true;
      path.push_back(v);
      dfs(start, v);
      path.pop_back();
      on_path[v] = false;
    }
  };

  for (int s = 0; s < n; ++s) {
    path = { s };
    on_path[s] = true;
    dfs(s, s);
    on_path[s] = false;
  }
  return out;
}

std::vector<std::vector<int>> ring_systems(const RingInfo &info) {
  int r = static_cast<int>(info.rings.size());
  std::vector<int> group(r);
  for (int i = 0; i < r; ++i)
    group[i] = i;
  std::function<int(int)> find = [&](int x) {
    return group[x] == x ? x : group[x] = find(group[x]);
  };
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      bool shared = std::any_of(info.rings[i].begin(), info.rings[i].end(), [&](int a) {
        return std::find(info.rings[j].begin(), info.rings[j].end(), a)
               != info.rings[j].end();
      });
      if (shared)
        group[find(i)] = find(j);
    }
  }
  std::vector<std::vector<int>> systems;
  std::vector<int> slot(r, -1);
  for (int i = 0; i < r; ++i) {
    int g = find(i);
    if (slot[g] < 0) {
      slot[g] = static_cast<int>(systems.size());
      systems.emplace_back();
    }
    systems[slot[g]].push_back(i);
  }
  return systems;
}

} // namespace pagforge::chem
