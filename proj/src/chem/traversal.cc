//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/chem/traversal.h"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "chemgym/random.h"

namespace chemgym::chem {

Traversal make_traversal(const Molecule &m, TraversalPolicy policy,
                         std::span<const int> ranks, Rng *rng) {
  const int n = m.num_atoms();
  if (policy == TraversalPolicy::kCanonical
      && static_cast<int>(ranks.size()) != n)
    throw std::invalid_argument("canonical traversal requires atom ranks");
  if (policy == TraversalPolicy::kRandom && rng == nullptr)
    throw std::invalid_argument("random traversal requires a random stream");

  Traversal t;
  t.parent_bond.assign(n, -1);
  t.children.resize(n);
  t.rings.resize(n);
  t.preorder.reserve(n);

  // Roots: one per component.
  std::vector<std::vector<int>> comps = m.components();
  for (std::vector<int> &comp: comps) {
    int root = comp.front();
    if (policy == TraversalPolicy::kCanonical) {
      root = *std::min_element(comp.begin(), comp.end(),
                               [&](int a, int b) { return ranks[a] < ranks[b]; });
    } else if (policy == TraversalPolicy::kRandom) {
      root = comp[rng->uniform_index(comp.size())];
    }
    t.roots.push_back(root);
  }
  if (policy == TraversalPolicy::kCanonical) {
    std::sort(t.roots.begin(), t.roots.end(),
              [&](int a, int b) { return ranks[a] < ranks[b]; });
  } else if (policy == TraversalPolicy::kRandom) {
    rng->shuffle(std::span<int>(t.roots));
  }

  auto ordered_neighbors = [&](int atom) {
    auto nb = m.neighbors(atom);
    std::vector<Neighbor> out(nb.begin(), nb.end());
    switch (policy) {
    case TraversalPolicy::kIndex:
      std::sort(out.begin(), out.end(), [](const Neighbor &a, const Neighbor &b) {
        return a.atom < b.atom;
      });
      break;
    case TraversalPolicy::kCanonical:
      std::sort(out.begin(), out.end(),
                [&](const Neighbor &a, const Neighbor &b) {
                  return ranks[a.atom] < ranks[b.atom];
                });
      break;
    case TraversalPolicy::kRandom:
      rng->shuffle(std::span<Neighbor>(out));
      break;
    }
    return out;
  };

  std::vector<char> visited(n, 0), bond_used(m.num_bonds(), 0);
  struct Frame {
    int atom;
    std::vector<Neighbor> nbrs;
    std::size_t next = 0;
  };
  std::vector<Frame> stack;

  auto enter = [&](int atom) {
    visited[atom] = 1;
    t.preorder.push_back(atom);
    stack.push_back(Frame { atom, ordered_neighbors(atom) });
  };

  for (int root: t.roots) {
    enter(root);
    while (!stack.empty()) {
      Frame &f = stack.back();
      if (f.next == f.nbrs.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor nb = f.nbrs[f.next++];
      if (bond_used[nb.bond] != 0)
        continue;
      bond_used[nb.bond] = 1;
      const int atom = f.atom;
      if (visited[nb.atom] == 0) {
        t.parent_bond[nb.atom] = nb.bond;
        t.children[atom].push_back(nb.atom);
        enter(nb.atom);  // invalidates f
      } else {
        // Unused edge to a visited atom: the neighbour is an ancestor.
        t.rings[atom].push_back(RingEvent { nb.bond, nb.atom, false });
        t.rings[nb.atom].push_back(RingEvent { nb.bond, atom, true });
      }
    }
  }
  for (std::vector<RingEvent> &events: t.rings) {
    std::stable_partition(events.begin(), events.end(),
                          [](const RingEvent &e) { return !e.opening; });
  }
  return t;
}

namespace {

// +1 when the stored mark reads '/' going from `from` across bond `bi`, -1
// for '\\', 0 when unmarked.
int side(const Molecule &m, int bi, int from) {
  const Bond &b = m.bond(bi);
  if (b.stereo == BondStereo::kNone)
    return 0;
  const int s = b.stereo == BondStereo::kUp ? 1 : -1;
  return from == b.begin ? s : -s;
}

}  // namespace

std::vector<BondStereo> written_bond_marks(const Molecule &m,
                                           const Traversal &t) {
  const int n = m.num_atoms();
  std::vector<BondStereo> out(m.num_bonds(), BondStereo::kNone);

  // Specified double bonds: each end has a marked single bond. ref[u] is that
  // neighbour and same[db] tells whether both references share a side.
  std::vector<int> ref(n, -1), double_of(n, -1);
  std::vector<std::pair<int, bool>> constraints;  // (double bond, same side)
  for (int bi = 0; bi < m.num_bonds(); ++bi) {
    const Bond &b = m.bond(bi);
    if (b.order != BondOrder::kDouble)
      continue;
    int ends[2] = { b.begin, b.end };
    int refs[2] = { -1, -1 }, sides[2] = { 0, 0 };
    for (int k = 0; k < 2; ++k) {
      for (const Neighbor &nb: m.neighbors(ends[k])) {
        if (nb.bond == bi || m.bond(nb.bond).order != BondOrder::kSingle)
          continue;
        const int s = side(m, nb.bond, ends[k]);
        if (s != 0) {
          refs[k] = nb.atom;
          sides[k] = s;
          break;
        }
      }
    }
    if (sides[0] == 0 || sides[1] == 0 || double_of[ends[0]] >= 0
        || double_of[ends[1]] >= 0)
      continue;
    for (int k = 0; k < 2; ++k) {
      ref[ends[k]] = refs[k];
      double_of[ends[k]] = bi;
    }
    constraints.emplace_back(bi, sides[0] == sides[1]);
  }
  if (constraints.empty())
    return out;

  // sign[u]: side of ref[u] as seen from u; other substituents take the
  // opposite side.
  auto side_of = [&](const std::vector<int> &sign, int u, int x) {
    return x == ref[u] ? sign[u] : -sign[u];
  };
  std::vector<char> same(m.num_bonds(), 0);
  for (auto [bi, s]: constraints)
    same[bi] = s ? 1 : 0;

  std::vector<int> sign(n, 0);
  auto propagate = [&](int start) {
    std::deque<int> queue { start };
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      const int db = double_of[u];
      const int v = m.bond(db).other(u);
      if (sign[v] == 0) {
        sign[v] = same[db] != 0 ? sign[u] : -sign[u];
        queue.push_back(v);
      }
      for (const Neighbor &nb: m.neighbors(u)) {
        const int w = nb.atom;
        if (m.bond(nb.bond).order != BondOrder::kSingle || double_of[w] < 0
            || sign[w] != 0)
          continue;
        // One mark serves both ends: its side from w is the opposite of its
        // side from u.
        const int want = -side_of(sign, u, w);
        sign[w] = u == ref[w] ? want : -want;
        queue.push_back(w);
      }
    }
  };

  auto assign = [&](int bi, int from) {
    const int to = m.bond(bi).other(from);
    int s = 0;
    if (double_of[from] >= 0 && m.bond(bi).order == BondOrder::kSingle
        && bi != double_of[from]) {
      if (sign[from] == 0) {
        sign[from] = to == ref[from] ? 1 : -1;
        propagate(from);
      }
      s = side_of(sign, from, to);
    } else if (double_of[to] >= 0 && m.bond(bi).order == BondOrder::kSingle
               && bi != double_of[to]) {
      if (sign[to] == 0) {
        // '/' from `from` reads '\\' from `to`.
        sign[to] = from == ref[to] ? -1 : 1;
        propagate(to);
      }
      s = -side_of(sign, to, from);
    }
    if (s != 0)
      out[bi] = s > 0 ? BondStereo::kUp : BondStereo::kDown;
  };

  for (int atom: t.preorder) {
    if (t.parent_bond[atom] >= 0)
      assign(t.parent_bond[atom], m.bond(t.parent_bond[atom]).other(atom));
    for (const RingEvent &e: t.rings[atom]) {
      if (e.opening)
        assign(e.bond, atom);
    }
  }
  return out;
}

}  // namespace chemgym::chem
