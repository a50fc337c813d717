//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_SPATIAL_SPATIAL_H_
#define CHEMGYM_SPATIAL_SPATIAL_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "chemgym/chem/molecule.h"

namespace chemgym {

using Vec3 = std::array<double, 3>;

// Heavy-atom 3D structure; coords[i] belongs to molecule.atom(i). Angstrom.
struct Conformer {
  chem::Molecule molecule;
  std::vector<Vec3> coords;
};

/// Builds a conformer, removing explicit hydrogen atoms (their count moves to
/// the bonded heavy atom). Throws CountMismatch if coords and atoms differ in
/// number.
Conformer make_conformer(const chem::Molecule &m, std::vector<Vec3> coords);

// Fixed-point rendering; "-0.000" is written as "0.000". Throws
// PrecisionOverflow unless |value| < 10000 after rounding (and finite).
std::string format_coordinate(double value, int precision = 3);

/// Text block: "<smiles>S</smiles>" followed by one "x y z" line per atom, in
/// the order the atoms appear in S. Atoms are written in index order.
std::string encode_conformer(const Conformer &c, int precision = 3);

// Inverse of encode_conformer. Throws FormatError (position = line number)
// for layout problems, CountMismatch when the number of coordinate lines
// differs from the number of SMILES atoms, and chem parse errors.
Conformer decode_conformer(std::string_view text);

struct ProteinAtom {
  std::string name;  // PDB atom name, e.g. "CA"
  Vec3 xyz;
};

struct Residue {
  char type;  // one-letter amino-acid code
  std::vector<ProteinAtom> atoms;
};

struct ProteinStructure {
  std::vector<Residue> residues;
};

/// "<protein3d>" + one line per residue + "</protein3d>", lines separated by
/// newlines: "<type> <name> <x> <y> <z> <name> <x> <y> <z> ...". Hydrogen
/// atoms are dropped. Throws UnsupportedFeature for residue types or atom
/// names without a token.
std::string encode_protein(const ProteinStructure &p, int precision = 3);

// Throws FormatError (position = line number within the block) and
// CountMismatch for a residue line whose fields are not name/x/y/z groups.
ProteinStructure decode_protein(std::string_view text);

/// Minimal MDL molfile (V2000) reader: counts line, atom block, bond block
/// (orders 1-4) and "M  CHG" lines. Hydrogens are stripped.
Conformer read_molfile(std::string_view text);

/// Minimal PDB reader: ATOM records of the first model, grouped by chain,
/// residue number and insertion code. Hydrogens and unknown residue names
/// are skipped.
ProteinStructure read_pdb(std::string_view text);

// One-letter code for a three-letter residue name, or 0.
char residue_code(std::string_view three_letter);

}  // namespace chemgym

#endif  // CHEMGYM_SPATIAL_SPATIAL_H_
