//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_TRAVERSAL_H_
#define CHEMGYM_CHEM_TRAVERSAL_H_

#include <functional>
#include <span>
#include <vector>

#include "chemgym/chem/molecule.h"

namespace chemgym {
class Rng;
}

namespace chemgym::chem {

struct RingEvent {
  int bond;
  int partner;
  bool opening;
};

/// Depth-first spanning forest of a molecule, in the shape a line notation
/// writes it: per atom the tree bond from its parent, its tree children in
/// written order (the last one continues the chain, the others become
/// branches), and its ring-closure events (closings first, then openings).
struct Traversal {
  std::vector<int> roots;
  std::vector<int> parent_bond;
  std::vector<std::vector<int>> children;
  std::vector<std::vector<RingEvent>> rings;
  std::vector<int> preorder;  // written atom order
};

enum class TraversalPolicy {
  kIndex,      // smallest atom index first
  kCanonical,  // lowest canonical rank first
  kRandom,     // random start atoms and neighbour order
};

// `ranks` is required for kCanonical, `rng` for kRandom.
Traversal make_traversal(const Molecule &m, TraversalPolicy policy,
                         std::span<const int> ranks = {}, Rng *rng = nullptr);

/// Directional bond marks for writing `t`, one per bond, each as seen in the
/// written direction (parent to child; ring bonds from the opening atom).
/// Every single bond next to a double bond whose configuration is specified
/// at both ends gets a mark; within each group of coupled marks the first one
/// written is '/'. Other bonds get kNone.
std::vector<BondStereo> written_bond_marks(const Molecule &m,
                                           const Traversal &t);

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_TRAVERSAL_H_
