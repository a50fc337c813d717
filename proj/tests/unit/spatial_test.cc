//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/random.h"
#include "chemgym/spatial/spatial.h"
#include "chemgym/tokenizer/tokenizer.h"

namespace chemgym {
namespace {

std::string read_file(const std::string &name) {
  std::ifstream in(std::string(CHEMGYM_TEST_DATA_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Conformer, Methane) {
  Conformer c = make_conformer(chem::parse_smiles("C"), { { 0.0, 0.0, 0.0 } });
  EXPECT_EQ(encode_conformer(c), "<smiles>C</smiles>\n0.000 0.000 0.000");
}

TEST(Conformer, FormatCoordinate) {
  EXPECT_EQ(format_coordinate(-0.0001), "0.000");
  EXPECT_EQ(format_coordinate(-1.2345), "-1.234");
  EXPECT_EQ(format_coordinate(9999.9994), "9999.999");
  EXPECT_EQ(format_coordinate(-9999.9994), "-9999.999");
  EXPECT_THROW(format_coordinate(9999.9996), PrecisionOverflow);
  EXPECT_THROW(format_coordinate(12345.0), PrecisionOverflow);
  EXPECT_THROW(format_coordinate(NAN), PrecisionOverflow);
}

TEST(Conformer, MolfileGolden) {
  Conformer c = read_molfile(read_file("ethanol.mol"));
  EXPECT_EQ(c.molecule.num_atoms(), 3);
  EXPECT_EQ(chem::to_canonical_smiles(c.molecule), "CCO");
  std::string block = read_file("ethanol_block.txt");
  block.pop_back();
  EXPECT_EQ(encode_conformer(c), block);
  Conformer back = decode_conformer(block);
  EXPECT_EQ(encode_conformer(back), block);
}

TEST(Conformer, WrittenOrder) {
  // Index order C, N, O with bonds C-O and N-O: written as "CON".
  chem::MoleculeBuilder b;
  chem::Atom c, n, o;
  n.atomic_number = 7;
  o.atomic_number = 8;
  b.add_atom(c);
  b.add_atom(n);
  b.add_atom(o);
  b.add_bond(0, 2, chem::BondOrder::kSingle);
  b.add_bond(1, 2, chem::BondOrder::kSingle);
  Conformer conf = make_conformer(b.build(), { { 1, 1, 1 }, { 2, 2, 2 },
                                               { 3, 3, 3 } });
  EXPECT_EQ(encode_conformer(conf),
            "<smiles>CON</smiles>\n1.000 1.000 1.000\n3.000 3.000 3.000\n"
            "2.000 2.000 2.000");
  Conformer back = decode_conformer(encode_conformer(conf));
  EXPECT_EQ(back.molecule.atom(2).atomic_number, 7);
  EXPECT_EQ(back.coords[2][0], 2.0);
}

TEST(Conformer, RoundTripTenAtoms) {
  chem::Molecule m = chem::parse_smiles("CC(=O)Nc1ccc(O)cc1");
  ASSERT_EQ(m.num_atoms(), 11);
  Rng rng(5);
  std::vector<Vec3> coords;
  for (int i = 0; i < m.num_atoms(); ++i)
    coords.push_back({ rng.uniform01() * 20 - 10, rng.uniform01() * 20 - 10,
                       rng.uniform01() * 20 - 10 });
  Conformer c = make_conformer(m, coords);
  Conformer back = decode_conformer(encode_conformer(c));
  // Parsed molecules are written in index order.
  ASSERT_EQ(back.coords.size(), coords.size());
  double worst = 0;
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (int k = 0; k < 3; ++k)
      worst = std::max(worst, std::abs(back.coords[i][k] - coords[i][k]));
  EXPECT_LE(worst, 5e-4);
}

TEST(Conformer, Errors) {
  EXPECT_THROW(decode_conformer("<smiles>CC</smiles>\n0 0 0"), CountMismatch);
  EXPECT_THROW(decode_conformer("<smiles>C</smiles>\n0 0"), FormatError);
  EXPECT_THROW(decode_conformer("CC\n0 0 0"), FormatError);
  EXPECT_THROW(make_conformer(chem::parse_smiles("CC"), {}), CountMismatch);
  EXPECT_THROW(encode_conformer(make_conformer(chem::parse_smiles("C"),
                                               { { 1e5, 0, 0 } })),
               PrecisionOverflow);
}

TEST(Conformer, HydrogensStripped) {
  chem::Molecule m = chem::parse_smiles("[H]OC([H])([H])[H]");
  Conformer c = make_conformer(m, std::vector<Vec3>(m.num_atoms()));
  EXPECT_EQ(c.molecule.num_atoms(), 2);
  EXPECT_EQ(chem::to_canonical_smiles(c.molecule), "CO");
  EXPECT_EQ(encode_conformer(c).find("[H]"), std::string::npos);
}

TEST(Protein, DipeptideGolden) {
  ProteinStructure p = read_pdb(read_file("dipeptide.pdb"));
  ASSERT_EQ(p.residues.size(), 2u);
  EXPECT_EQ(p.residues[0].type, 'A');
  EXPECT_EQ(p.residues[0].atoms.size(), 5u);
  EXPECT_EQ(p.residues[1].atoms.size(), 5u);
  std::string text = encode_protein(p);
  EXPECT_EQ(text, read_file("dipeptide_block.txt"));
  EXPECT_EQ(encode_protein(decode_protein(text)), text);

  Vocabulary v = Vocabulary::with_default_text();
  TokenSequence seq = tokenize(text, v);
  std::vector<std::string> names = token_names(seq.ids, v);
  EXPECT_EQ(names[0], "<protein3d>");
  EXPECT_EQ(names[1], "am_A");
  EXPECT_EQ(names[2], " ");
  EXPECT_EQ(names[3], "atom_name_N");
  EXPECT_NE(std::find(names.begin(), names.end(), "atom_name_CA"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "am_G"), names.end());
  EXPECT_EQ(names.back(), "</protein3d>");
  EXPECT_EQ(detokenize(seq.ids, v), text);
}

TEST(Protein, Errors) {
  EXPECT_THROW(decode_protein("<protein3d>A N 1 2</protein3d>"), CountMismatch);
  EXPECT_THROW(decode_protein("<protein3d>Z N 1 2 3</protein3d>"), FormatError);
  EXPECT_THROW(decode_protein("A N 1 2 3"), FormatError);
  ProteinStructure p { { Residue { 'A', { ProteinAtom { "SE", {} } } } } };
  EXPECT_THROW(encode_protein(p), UnsupportedFeature);
  EXPECT_TRUE(decode_protein("<protein3d></protein3d>").residues.empty());
  EXPECT_EQ(residue_code("TRP"), 'W');
  EXPECT_EQ(residue_code("HOH"), 0);
}

}  // namespace
}  // namespace chemgym
