# chemgym - Copyright 2026 The chemgym Authors.
# SPDX-License-Identifier: Apache-2.0
"""Per-molecule graph invariants from RDKit for the test corpus: Hill formula
with implicit hydrogens, net charge, heavy atoms, bonds, and the number of
specified tetrahedral centres.

Usage: python make_rdkit_invariants.py  (writes tests/data/rdkit_invariants.tsv)
"""

from pathlib import Path

import rdkit
from rdkit import Chem
from rdkit.Chem.rdMolDescriptors import CalcMolFormula

DATA = Path(__file__).resolve().parents[1] / "data"


def main():
    lines = [l for l in (DATA / "corpus_1000.smi").read_text().splitlines()
             if l and not l.startswith("#")]
    out = [f"# rdkit {rdkit.__version__}: smiles formula charge heavy bonds "
           "chiral"]
    for smi in lines:
        m = Chem.MolFromSmiles(smi)
        formula = CalcMolFormula(m).split("+")[0].split("-")[0]
        charge = Chem.GetFormalCharge(m)
        chiral = sum(1 for a in m.GetAtoms()
                     if a.GetChiralTag() != Chem.ChiralType.CHI_UNSPECIFIED)
        out.append("\t".join([smi, formula, str(charge),
                              str(m.GetNumHeavyAtoms()),
                              str(m.GetNumBonds()), str(chiral)]))
    (DATA / "rdkit_invariants.tsv").write_text("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
