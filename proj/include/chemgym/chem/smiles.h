//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_SMILES_H_
#define CHEMGYM_CHEM_SMILES_H_

#include <string>
#include <string_view>
#include <vector>

#include "chemgym/chem/molecule.h"
#include "chemgym/chem/traversal.h"

namespace chemgym {
class Rng;
}

namespace chemgym::chem {

/// Parses a SMILES string.
///
/// Supported: organic-subset atoms, bracket atoms with isotope, chirality
/// (@, @@), hydrogen count and charge; aromatic lowercase atoms; bonds
/// - = # : / \; branches; ring closures 0-9 and %nn; '.' component
/// separators. Throws SyntaxError (with byte offset) for malformed input,
/// ValenceError for chemically impossible atoms, and UnsupportedFeature for
/// notation outside that subset (wildcards, atom classes, quadruple bonds,
/// extended chirality classes, unknown elements).
Molecule parse_smiles(std::string_view smiles);

struct SmilesWriteOptions {
  TraversalPolicy policy = TraversalPolicy::kIndex;
  bool kekule = false;  // write Kekulé bonds and uppercase atoms
};

struct SmilesOutput {
  std::string smiles;
  std::vector<int> atom_order;  // atom index of each written atom
};

// Whether the writer must spell the atom in brackets: anything a reader would
// not reconstruct from the bare symbol (isotope, charge, hydrogen count, pi
// participation).
bool needs_brackets(const Molecule &m, int atom, bool kekule);

// Stereo markers are not written.
SmilesOutput write_smiles(const Molecule &m, const SmilesWriteOptions &options,
                          std::span<const int> ranks = {}, Rng *rng = nullptr);

// Unique string per molecular graph (stereo ignored). With `kekule` the same
// traversal is written with Kekulé bonds and uppercase atoms.
std::string to_canonical_smiles(const Molecule &m, bool kekule = false);

// Non-canonical serialization: start atoms and neighbour visiting order drawn
// from `rng`.
std::string random_traversal_smiles(const Molecule &m, Rng &rng);

// Canonical SMILES of the input, or throws like parse_smiles.
std::string canonicalize_smiles(std::string_view smiles);

bool same_molecule(const Molecule &a, const Molecule &b);

/// Rewrites the molecule so that exactly the bonds whose single/double
/// assignment differs between Kekulé structures are aromatic. The result does
/// not depend on which Kekulé structure (or aromatic spelling) the input
/// used, so it is the form canonicalization and fingerprints operate on.
Molecule normalize_resonance(const Molecule &m);

// Canonical atom ranks (0 = first), computed by iterative neighbourhood
// refinement with deterministic tie-breaking.
std::vector<int> canonical_ranks(const Molecule &m);

// Every ranking reachable by tie-breaking, in a fixed order, up to `limit`.
// Serializations that depend on stereo take the smallest output over them.
std::vector<std::vector<int>> canonical_rank_candidates(const Molecule &m,
                                                        std::size_t limit);
inline constexpr std::size_t kStereoSearchLimit = 4096;

bool has_stereo(const Molecule &m);

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_SMILES_H_
