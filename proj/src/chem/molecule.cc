//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/molecule.h"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "chemgym/chem/element.h"
#include "chemgym/error.h"

namespace chemgym::chem {

std::string_view Atom::symbol() const noexcept {
  const ElementInfo *e = find_element(atomic_number);
  return e == nullptr ? std::string_view("?") : e->symbol;
}

int Molecule::find_bond(int a, int b) const {
  for (const Neighbor &n: neighbors(a)) {
    if (n.atom == b)
      return n.bond;
  }
  return -1;
}

bool Molecule::is_ring_atom(int atom) const {
  for (const Neighbor &n: neighbors(atom)) {
    if (ring_bond_[n.bond] != 0)
      return true;
  }
  return false;
}

int Molecule::bond_valence_sum(int atom) const {
  int s = 0;
  for (const Neighbor &n: neighbors(atom))
    s += bond_valence(bonds_[n.bond].order);
  return s;
}

int Molecule::total_valence(int atom) const {
  int s = atoms_[atom].h_count;
  for (const Neighbor &n: neighbors(atom))
    s += static_cast<int>(kekule_[n.bond]);
  return s;
}

std::vector<std::vector<int>> Molecule::components() const {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(atoms_.size(), 0);
  for (int start = 0; start < num_atoms(); ++start) {
    if (seen[start] != 0)
      continue;
    std::vector<int> comp { start };
    seen[start] = 1;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (const Neighbor &n: neighbors(comp[i])) {
        if (seen[n.atom] == 0) {
          seen[n.atom] = 1;
          comp.push_back(n.atom);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

int Molecule::heavy_atom_count() const {
  return static_cast<int>(std::count_if(
      atoms_.begin(), atoms_.end(),
      [](const Atom &a) { return a.atomic_number != 1; }));
}

Molecule relabeled(const Molecule &m, std::span<const int> new_index) {
  const int n = m.num_atoms();
  std::vector<int> old_index(n);
  for (int i = 0; i < n; ++i)
    old_index[new_index[i]] = i;
  std::vector<int> bonds(m.num_bonds());
  for (int bi = 0; bi < m.num_bonds(); ++bi)
    bonds[bi] = bi;
  auto key = [&](int bi) {
    const Bond &b = m.bond(bi);
    const int x = new_index[b.begin], y = new_index[b.end];
    return std::make_pair(std::min(x, y), std::max(x, y));
  };
  std::sort(bonds.begin(), bonds.end(),
            [&](int a, int b) { return key(a) < key(b); });

  MoleculeBuilder builder;
  for (int i = 0; i < n; ++i) {
    Atom a = m.atom(old_index[i]);
    a.bracket = true;
    builder.add_atom(a);
  }
  for (int bi: bonds) {
    const Bond &b = m.bond(bi);
    builder.add_bond(new_index[b.begin], new_index[b.end], b.order, b.stereo);
  }
  Molecule out = builder.build();
  bool chiral = false;
  for (int i = 0; i < n; ++i) {
    const Atom &a = out.atom(i);
    if (a.chirality == Chirality::kNone)
      continue;
    chiral = true;
    std::vector<int> from = chirality_reference_order(m, old_index[i]);
    for (int &x: from) {
      if (x >= 0)
        x = new_index[x];
    }
    builder.atom(i).chirality = permute_chirality(
        a.chirality, from, chirality_reference_order(out, i));
  }
  return chiral ? builder.build() : out;
}

std::vector<int> chirality_reference_order(const Molecule &m, int atom) {
  std::vector<int> out;
  if (m.atom(atom).h_count > 0)
    out.push_back(-1);
  for (const Neighbor &nb: m.neighbors(atom))
    out.push_back(nb.atom);
  return out;
}

Chirality permute_chirality(Chirality tag, std::span<const int> from,
                            std::span<const int> to) {
  if (tag == Chirality::kNone || from.size() != to.size())
    return Chirality::kNone;
  std::vector<int> perm;
  for (int x: to) {
    auto it = std::find(from.begin(), from.end(), x);
    if (it == from.end())
      return Chirality::kNone;
    perm.push_back(static_cast<int>(it - from.begin()));
  }
  bool odd = false;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    while (perm[i] != static_cast<int>(i)) {
      std::swap(perm[i], perm[perm[i]]);
      odd = !odd;
    }
  }
  if (!odd)
    return tag;
  return tag == Chirality::kCW ? Chirality::kCCW : Chirality::kCW;
}

// ---------------------------------------------------------------------------

int MoleculeBuilder::add_atom(const Atom &atom) {
  atoms_.push_back(atom);
  return static_cast<int>(atoms_.size()) - 1;
}

bool MoleculeBuilder::has_bond(int a, int b) const {
  return std::any_of(bonds_.begin(), bonds_.end(), [&](const Bond &bd) {
    return (bd.begin == a && bd.end == b) || (bd.begin == b && bd.end == a);
  });
}

int MoleculeBuilder::add_bond(int a, int b, BondOrder order,
                              BondStereo stereo) {
  if (a == b)
    throw std::invalid_argument("bond from an atom to itself");
  if (a < 0 || b < 0 || a >= num_atoms() || b >= num_atoms())
    throw std::invalid_argument("bond endpoint out of range");
  if (has_bond(a, b))
    throw std::invalid_argument("duplicate bond");
  bonds_.push_back(Bond { a, b, order, stereo });
  return static_cast<int>(bonds_.size()) - 1;
}

namespace {

// Bridges via iterative lowlink DFS; every non-bridge bond lies on a cycle.
std::vector<std::uint8_t> find_ring_bonds(const Molecule &m) {
  const int n = m.num_atoms();
  std::vector<std::uint8_t> ring(m.num_bonds(), 1);
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;
  for (int root = 0; root < n; ++root) {
    if (disc[root] >= 0)
      continue;
    disc[root] = low[root] = timer++;
    stack.push_back({ root, -1, 0 });
    while (!stack.empty()) {
      Frame &f = stack.back();
      auto nbrs = m.neighbors(f.atom);
      if (f.next < nbrs.size()) {
        const Neighbor nb = nbrs[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        if (disc[nb.atom] < 0) {
          disc[nb.atom] = low[nb.atom] = timer++;
          stack.push_back({ nb.atom, nb.bond, 0 });
        } else {
          low[f.atom] = std::min(low[f.atom], disc[nb.atom]);
        }
        continue;
      }
      const Frame done = f;
      stack.pop_back();
      if (!stack.empty()) {
        Frame &parent = stack.back();
        low[parent.atom] = std::min(low[parent.atom], low[done.atom]);
        if (low[done.atom] > disc[parent.atom])
          ring[done.parent_bond] = 0;
      }
    }
  }
  return ring;
}

int smallest_at_least(const std::vector<int> &valences, int x) {
  for (int v: valences) {
    if (v >= x)
      return v;
  }
  return -1;
}

std::string describe(const Atom &a, int index) {
  std::string s(a.symbol());
  if (a.charge != 0)
    s += (a.charge > 0 ? "+" : "") + std::to_string(a.charge);
  return s + " (atom " + std::to_string(index) + ")";
}

// Pi-participation and hydrogen count for an aromatic atom with bond valence
// sum `s`. Bracket atoms keep their hydrogen count.
std::optional<ImplicitHydrogens> aromatic_hydrogens(const Atom &a, int s) {
  std::vector<int> valences = allowed_valences(a.atomic_number, a.charge);
  if (a.bracket) {
    int v = smallest_at_least(valences, s + a.h_count);
    if (v < 0)
      return std::nullopt;
    return ImplicitHydrogens { a.h_count, v > s + a.h_count };
  }
  int v = smallest_at_least(valences, s);
  if (v < 0)
    return std::nullopt;
  if (v > s)
    return ImplicitHydrogens { v - s - 1, true };
  return ImplicitHydrogens { 0, false };
}

}  // namespace

std::optional<ImplicitHydrogens> implicit_hydrogens(const Molecule &m,
                                                    int atom,
                                                    bool use_kekule) {
  const Atom &a = m.atom(atom);
  int s = 0;
  for (const Neighbor &n: m.neighbors(atom)) {
    s += use_kekule ? static_cast<int>(m.kekule_order(n.bond))
                    : bond_valence(m.bond(n.bond).order);
  }
  if (a.aromatic && !use_kekule) {
    Atom bare = a;
    bare.bracket = false;
    return aromatic_hydrogens(bare, s);
  }
  int v = smallest_at_least(allowed_valences(a.atomic_number, a.charge), s);
  if (v < 0)
    return std::nullopt;
  return ImplicitHydrogens { v - s, false };
}

Molecule MoleculeBuilder::build() const {
  Molecule m;
  m.atoms_ = atoms_;
  m.bonds_ = bonds_;

  const int n = static_cast<int>(atoms_.size());
  std::vector<int> deg(n, 0);
  for (const Bond &b: bonds_) {
    ++deg[b.begin];
    ++deg[b.end];
  }
  m.adj_offset_.assign(n + 1, 0);
  for (int i = 0; i < n; ++i)
    m.adj_offset_[i + 1] = m.adj_offset_[i] + deg[i];
  m.adj_.resize(m.adj_offset_[n]);
  std::vector<int> fill(m.adj_offset_.begin(), m.adj_offset_.end() - 1);
  for (int bi = 0; bi < static_cast<int>(bonds_.size()); ++bi) {
    const Bond &b = bonds_[bi];
    m.adj_[fill[b.begin]++] = Neighbor { b.end, bi };
    m.adj_[fill[b.end]++] = Neighbor { b.begin, bi };
  }

  m.ring_bond_ = find_ring_bonds(m);

  for (Bond &b: m.bonds_) {
    if (b.order != BondOrder::kAromatic)
      continue;
    if (!m.atoms_[b.begin].aromatic || !m.atoms_[b.end].aromatic)
      throw UnsupportedFeature(
          "aromatic bond between non-aromatic atoms "
          + describe(m.atoms_[b.begin], b.begin) + " and "
          + describe(m.atoms_[b.end], b.end));
  }
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    if (m.bonds_[bi].order == BondOrder::kAromatic && m.ring_bond_[bi] == 0)
      m.bonds_[bi].order = BondOrder::kSingle;
  }

  std::vector<char> needs_pi(n, 0);
  for (int i = 0; i < n; ++i) {
    Atom &a = m.atoms_[i];
    if (allowed_valences(a.atomic_number, a.charge).empty())
      throw UnsupportedFeature("no valence model for " + describe(a, i));
    if (a.h_count < 0)
      throw ValenceError("negative hydrogen count on " + describe(a, i));
    if (a.aromatic && !m.is_ring_atom(i))
      throw ValenceError("non-ring atom marked aromatic: " + describe(a, i));

    const int s = m.bond_valence_sum(i);
    if (a.aromatic) {
      auto h = aromatic_hydrogens(a, s);
      if (!h)
        throw ValenceError("no valence fits aromatic " + describe(a, i));
      a.h_count = h->h_count;
      needs_pi[i] = h->needs_pi ? 1 : 0;
    } else if (!a.bracket) {
      int v = smallest_at_least(
          allowed_valences(a.atomic_number, a.charge), s);
      if (v < 0) {
        throw ValenceError(describe(a, i) + " has valence "
                           + std::to_string(s) + ", exceeding maximum "
                           + std::to_string(
                               max_valence(a.atomic_number, a.charge)));
      }
      a.h_count = v - s;
    }
  }

  // Kekulization: every pi atom takes exactly one double bond along the
  // aromatic bonds.
  m.kekule_.resize(m.bonds_.size());
  std::vector<std::pair<int, int>> pi_edges;
  std::vector<int> pi_bond_ids;
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    const Bond &b = m.bonds_[bi];
    m.kekule_[bi] =
        b.order == BondOrder::kAromatic ? BondOrder::kSingle : b.order;
    if (b.order == BondOrder::kAromatic && needs_pi[b.begin] != 0
        && needs_pi[b.end] != 0) {
      pi_edges.emplace_back(b.begin, b.end);
      pi_bond_ids.push_back(bi);
    }
  }
  if (std::any_of(needs_pi.begin(), needs_pi.end(),
                  [](char c) { return c != 0; })) {
    std::vector<int> mate = maximum_matching(n, pi_edges);
    for (int i = 0; i < n; ++i) {
      if (needs_pi[i] != 0 && mate[i] < 0)
        throw ValenceError("cannot kekulize aromatic system at "
                           + describe(m.atoms_[i], i));
    }
    for (std::size_t k = 0; k < pi_edges.size(); ++k) {
      if (mate[pi_edges[k].first] == pi_edges[k].second)
        m.kekule_[pi_bond_ids[k]] = BondOrder::kDouble;
    }
  }

  for (int i = 0; i < n; ++i) {
    const Atom &a = m.atoms_[i];
    const int total = m.total_valence(i);
    const int max_v = max_valence(a.atomic_number, a.charge);
    if (total > max_v) {
      throw ValenceError(describe(a, i) + " has valence "
                         + std::to_string(total) + ", exceeding maximum "
                         + std::to_string(max_v));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------

std::vector<int> maximum_matching(int n,
                                  std::span<const std::pair<int, int>> edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b]: edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::vector<int> match(n, -1), parent(n), base(n);
  std::vector<char> used(n), blossom(n);

  // Greedy start, preferring low-degree vertices first.
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i)
    order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return adj[a].size() < adj[b].size();
  });
  for (int v: order) {
    if (match[v] >= 0)
      continue;
    for (int to: adj[v]) {
      if (match[to] < 0) {
        match[v] = to;
        match[to] = v;
        break;
      }
    }
  }

  auto lca = [&](int a, int b) {
    std::vector<char> seen(n, 0);
    for (;;) {
      a = base[a];
      seen[a] = 1;
      if (match[a] < 0)
        break;
      a = parent[match[a]];
    }
    for (;;) {
      b = base[b];
      if (seen[b] != 0)
        return b;
      b = parent[match[b]];
    }
  };

  auto mark_path = [&](int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = blossom[base[match[v]]] = 1;
      parent[v] = child;
      child = match[v];
      v = parent[match[v]];
    }
  };

  auto find_path = [&](int root) {
    std::fill(used.begin(), used.end(), 0);
    std::fill(parent.begin(), parent.end(), -1);
    for (int i = 0; i < n; ++i)
      base[i] = i;
    used[root] = 1;
    std::deque<int> q { root };
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (int to: adj[v]) {
        if (base[v] == base[to] || match[v] == to)
          continue;
        if (to == root || (match[to] >= 0 && parent[match[to]] >= 0)) {
          int cur = lca(v, to);
          std::fill(blossom.begin(), blossom.end(), 0);
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (int i = 0; i < n; ++i) {
            if (blossom[base[i]] != 0) {
              base[i] = cur;
              if (used[i] == 0) {
                used[i] = 1;
                q.push_back(i);
              }
            }
          }
        } else if (parent[to] < 0) {
          parent[to] = v;
          if (match[to] < 0)
            return to;
          used[match[to]] = 1;
          q.push_back(match[to]);
        }
      }
    }
    return -1;
  };

  for (int v = 0; v < n; ++v) {
    if (match[v] >= 0 || adj[v].empty())
      continue;
    int u = find_path(v);
    while (u >= 0) {
      int pv = parent[u];
      int ppv = match[pv];
      match[u] = pv;
      match[pv] = u;
      u = ppv;
    }
  }
  return match;
}

}  // namespace chemgym::chem
