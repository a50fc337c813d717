//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <string>

#include <gtest/gtest.h>

#include "chemgym/chem/fingerprint.h"
#include "chemgym/chem/selfies.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/random.h"

namespace chemgym::chem {
namespace {

TEST(ParseSmiles, AceticAcid) {
  Molecule m = parse_smiles("CC(=O)O");
  EXPECT_EQ(m.num_atoms(), 4);
  EXPECT_EQ(m.num_bonds(), 3);
  EXPECT_EQ(m.atom(0).h_count, 3);
  EXPECT_EQ(m.atom(1).h_count, 0);
  EXPECT_EQ(m.atom(3).h_count, 1);
  EXPECT_EQ(m.bond(1).order, BondOrder::kDouble);
}

TEST(ParseSmiles, Benzene) {
  Molecule m = parse_smiles("c1ccccc1");
  ASSERT_EQ(m.num_atoms(), 6);
  int doubles = 0;
  for (int b = 0; b < m.num_bonds(); ++b) {
    EXPECT_EQ(m.bond(b).order, BondOrder::kAromatic);
    if (m.kekule_order(b) == BondOrder::kDouble)
      ++doubles;
  }
  EXPECT_EQ(doubles, 3);
  for (int i = 0; i < 6; ++i)
    EXPECT_EQ(m.atom(i).h_count, 1);
}

TEST(ParseSmiles, BracketAtoms) {
  Molecule m = parse_smiles("[13CH3][NH3+].[O-]C(=O)[C@@H](N)C");
  EXPECT_EQ(m.atom(0).isotope, 13);
  EXPECT_EQ(m.atom(0).h_count, 3);
  EXPECT_EQ(m.atom(1).charge, 1);
  EXPECT_EQ(m.atom(2).charge, -1);
  EXPECT_NE(m.atom(5).chirality, Chirality::kNone);
  EXPECT_EQ(write_smiles(m, {}).smiles, "[13CH3][NH3+].[O-]C(=O)[C@@H](N)C");
  EXPECT_EQ(m.components().size(), 2u);
}

TEST(ParseSmiles, Pyrrole) {
  Molecule m = parse_smiles("c1cc[nH]c1");
  EXPECT_EQ(m.atom(3).h_count, 1);
  EXPECT_THROW(parse_smiles("c1ccnc1"), ValenceError);
}

void expect_syntax_error(const std::string &s, std::size_t pos) {
  try {
    parse_smiles(s);
    ADD_FAILURE() << s << " parsed";
  } catch (const SyntaxError &e) {
    EXPECT_EQ(e.position(), pos) << s << ": " << e.what();
  }
}

TEST(ParseSmiles, SyntaxErrors) {
  expect_syntax_error("", 0);
  expect_syntax_error("C1CC", 1);
  expect_syntax_error("CC)", 2);
  expect_syntax_error("C(C", 1);
  expect_syntax_error("C()C", 2);
  expect_syntax_error("CC=", 2);
  expect_syntax_error("C11", 2);
  expect_syntax_error("C1C1", 3);
  expect_syntax_error("C=1CC#1", 6);
  expect_syntax_error("[CH4", 0);
  expect_syntax_error("C%1", 1);
  expect_syntax_error("Xx", 0);
  expect_syntax_error("C(.C)", 2);
}

TEST(ParseSmiles, UnsupportedFeatures) {
  EXPECT_THROW(parse_smiles("*C"), UnsupportedFeature);
  EXPECT_THROW(parse_smiles("[CH4:1]"), UnsupportedFeature);
  EXPECT_THROW(parse_smiles("C$C"), UnsupportedFeature);
  EXPECT_THROW(parse_smiles("[C@TH1](F)(Cl)(Br)I"), UnsupportedFeature);
  EXPECT_THROW(parse_smiles("[Xq]"), SyntaxError);
  EXPECT_THROW(parse_smiles("[Og]"), UnsupportedFeature);
}

TEST(ParseSmiles, ValenceErrors) {
  EXPECT_THROW(parse_smiles("C(C)(C)(C)(C)C"), ValenceError);
  EXPECT_THROW(parse_smiles("O(C)(C)C"), ValenceError);
  EXPECT_THROW(parse_smiles("[CH5]"), ValenceError);
  EXPECT_NO_THROW(parse_smiles("C[N+](C)(C)C"));
  EXPECT_NO_THROW(parse_smiles("CS(=O)(=O)C"));
}

TEST(CanonicalSmiles, SpellingInvariant) {
  EXPECT_EQ(canonicalize_smiles("OC(C)=O"), canonicalize_smiles("CC(=O)O"));
  EXPECT_EQ(canonicalize_smiles("C1=CC=CC=C1"), canonicalize_smiles("c1ccccc1"));
  EXPECT_EQ(canonicalize_smiles("c1ccccc1"), "c1ccccc1");
  EXPECT_EQ(canonicalize_smiles("C1=CC=CN=C1"), canonicalize_smiles("n1ccccc1"));
  EXPECT_EQ(canonicalize_smiles("c1ccc2ccccc2c1"),
            canonicalize_smiles("C1=CC2=CC=CC=C2C=C1"));
  EXPECT_EQ(canonicalize_smiles("o1cccc1"), canonicalize_smiles("C1=COC=C1"));
  EXPECT_NE(canonicalize_smiles("CCO"), canonicalize_smiles("COC"));
}

TEST(CanonicalSmiles, RandomTraversalRoundTrip) {
  const char *inputs[] = {
    "CC(=O)Oc1ccccc1C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "c1ccc2c(c1)[nH]c1ccccc12",
    "C[C@H](N)C(=O)O.[Na+].[Cl-]",
    "O=S(=O)(N)c1ccc(cc1)C(F)(F)F",
    "C1CC2CCC1C2",
    "c1ccc2cc3ccccc3cc2c1",
  };
  Rng rng(7);
  for (const char *s: inputs) {
    Molecule m = parse_smiles(s);
    const std::string canon = to_canonical_smiles(m);
    EXPECT_EQ(canonicalize_smiles(canon), canon) << s;
    for (int k = 0; k < 20; ++k) {
      std::string r = random_traversal_smiles(m, rng);
      EXPECT_EQ(canonicalize_smiles(r), canon) << s << " -> " << r;
    }
  }
}

TEST(CanonicalSmiles, Stereo) {
  EXPECT_EQ(canonicalize_smiles("N[C@@H](C)C(=O)O"),
            canonicalize_smiles("C[C@H](N)C(=O)O"));
  EXPECT_NE(canonicalize_smiles("N[C@@H](C)C(=O)O"),
            canonicalize_smiles("N[C@H](C)C(=O)O"));
  EXPECT_EQ(canonicalize_smiles("F/C=C/F"), canonicalize_smiles("C(\\F)=C/F"));
  EXPECT_NE(canonicalize_smiles("F/C=C/F"), canonicalize_smiles("F/C=C\\F"));
  EXPECT_NE(canonicalize_smiles("C/1=C/CCCCCC1"),
            canonicalize_smiles("C1CCCCC/C=C/1"));
  EXPECT_EQ(canonicalize_smiles("C[C@H]1CC[C@@H](O)CC1"),
            canonicalize_smiles("O[C@H]1CC[C@@H](C)CC1"));

  Rng rng(3);
  for (const char *smi: { "C/1=C/CCCCCC1", "O[C@]12CCCC[C@@H]1CCCC2",
                          "F/C=C/C=C/C=C\\Br" }) {
    const std::string canon = canonicalize_smiles(smi);
    EXPECT_EQ(canonicalize_smiles(canon), canon);
    Molecule m = parse_smiles(smi);
    for (int k = 0; k < 20; ++k) {
      EXPECT_EQ(canonicalize_smiles(random_traversal_smiles(m, rng)), canon);
      EXPECT_EQ(to_canonical_smiles(
                    decode_selfies(random_traversal_selfies(m, rng))),
                canon);
    }
  }
}

TEST(Selfies, Basics) {
  EXPECT_EQ(encode_selfies(parse_smiles("C")), "[C]");
  EXPECT_EQ(encode_selfies(parse_smiles("c1ccccc1")),
            "[C][=C][C][=C][C][=C][Ring1][=Branch1]");
  EXPECT_EQ(to_canonical_smiles(decode_selfies("[C][C][=Branch1][C][=O][O]")),
            canonicalize_smiles("CC(=O)O"));
  EXPECT_TRUE(decode_selfies("").empty());
  EXPECT_THROW(decode_selfies("[Xx]"), SymbolError);
  EXPECT_EQ(to_canonical_smiles(decode_selfies("[C][Branch1][C][O][Ring1][C][=O]")),
            canonicalize_smiles("C(O)=O"));
  EXPECT_EQ(to_canonical_smiles(decode_selfies("[=C][=O]")), "C=O");
  EXPECT_EQ(to_canonical_smiles(decode_selfies("[Branch1][C][C][Ring1][F]")),
            "C=C");
}

TEST(Selfies, RoundTrip) {
  const char *inputs[] = {
    "CC(=O)Oc1ccccc1C(=O)O",
    "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
    "c1ccc2c(c1)[nH]c1ccccc12",
    "C[C@H](N)C(=O)O.[Na+].[Cl-]",
    "O=S(=O)(N)c1ccc(cc1)C(F)(F)F",
    "C1CCC2(CC1)CCCC2",
    "[13CH3]C[NH3+]",
    "C[N+](=O)[O-]",
  };
  for (const char *s: inputs) {
    Molecule m = parse_smiles(s);
    std::string sf = encode_selfies(m);
    EXPECT_EQ(to_canonical_smiles(decode_selfies(sf)), to_canonical_smiles(m))
        << s << " -> " << sf;
  }
}

TEST(Fingerprint, Basics) {
  Molecule m = parse_smiles("CC(=O)O");
  Fingerprint a = circular_fingerprint(m);
  EXPECT_GT(a.popcount(), 0);
  EXPECT_DOUBLE_EQ(tanimoto(a, a), 1.0);
  EXPECT_EQ(circular_fingerprint(parse_smiles("CO"), 0).popcount(), 2);
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    Molecule r = parse_smiles(random_traversal_smiles(parse_smiles("c1ccccc1CC(=O)N"), rng));
    EXPECT_EQ(circular_fingerprint(r), circular_fingerprint(parse_smiles("NC(=O)Cc1ccccc1")));
  }
  EXPECT_THROW(tanimoto(Fingerprint(64, 2), Fingerprint(128, 2)), LengthMismatch);
}

}  // namespace
}  // namespace chemgym::chem
