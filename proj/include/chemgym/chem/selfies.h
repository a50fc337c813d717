//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_CHEM_SELFIES_H_
#define CHEMGYM_CHEM_SELFIES_H_

#include <string>
#include <string_view>
#include <vector>

#include "chemgym/chem/molecule.h"
#include "chemgym/random.h"

namespace chemgym::chem {

// Splits a SELFIES string into its bracketed symbols; '.' separators are
// returned as their own symbol. Throws SymbolError on text outside brackets
// or an unterminated bracket.
std::vector<std::string> split_selfies(std::string_view selfies);

/// SELFIES (v2) encoding of a molecule.
///
/// The molecule is kekulized and written along its canonical traversal, so the
/// output is a canonical SELFIES string and matches what the reference encoder
/// produces for the canonical Kekulé SMILES. Stereo information is dropped.
/// Throws UnsupportedFeature for atoms outside the closed alphabet (see
/// selfies_alphabet()) or exceeding their bonding capacity.
std::string encode_selfies(const Molecule &m);

// SELFIES written along a random traversal (start atom and neighbour order
// drawn from rng).
std::string random_traversal_selfies(const Molecule &m, Rng &rng);

/// Decodes a SELFIES string. Every sequence of alphabet symbols yields a
/// valence-valid molecule: bonds are truncated to the remaining bonding
/// capacity, surplus branch and ring symbols are ignored. The empty string
/// decodes to the empty molecule. Throws SymbolError only for symbols that
/// are not SELFIES symbols over the supported elements.
Molecule decode_selfies(std::string_view selfies);

// Bonding capacity used by the derivation rules for an element/charge pair,
// or -1 when the combination is not representable.
int selfies_bonding_capacity(int atomic_number, int charge);

// The closed symbol inventory the encoder can produce plus the structural
// symbols ([nop], [epsilon], '.'); sorted.
const std::vector<std::string> &selfies_alphabet();

}  // namespace chemgym::chem

#endif  // CHEMGYM_CHEM_SELFIES_H_
