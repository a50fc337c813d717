//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/spatial/spatial.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "chemgym/chem/element.h"
#include "chemgym/chem/smiles.h"
#include "chemgym/error.h"
#include "chemgym/tokenizer/vocabulary.h"

namespace chemgym {

namespace {

constexpr std::string_view kResidueNames[] = {
  "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
  "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL",
};
constexpr std::string_view kResidueCodes = "ARNDCQEGHILKMFPSTWYV";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t end = s.find(sep, start);
    if (end == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r'))
      ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r')
      ++j;
    if (j > i)
      out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double &out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+')
    s.remove_prefix(1);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty() &&
         std::isfinite(out);
}

bool parse_int(std::string_view s, int &out) {
  s = trim(s);
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

bool is_hydrogen_name(std::string_view name) {
  if (name.empty())
    return false;
  if (name[0] == 'H' || name[0] == 'D')
    return true;
  return name.size() > 1 && std::isdigit(static_cast<unsigned char>(name[0])) &&
         (name[1] == 'H' || name[1] == 'D');
}

bool known_atom_name(std::string_view name) {
  const auto &names = inventory_symbols(ChemInventory::kAtomName);
  return std::find(names.begin(), names.end(), name) != names.end();
}

void append_xyz(std::string &out, const Vec3 &v, int precision) {
  for (int k = 0; k < 3; ++k) {
    out += ' ';
    out += format_coordinate(v[k], precision);
  }
}

}  // namespace

char residue_code(std::string_view three_letter) {
  for (std::size_t i = 0; i < std::size(kResidueNames); ++i)
    if (kResidueNames[i] == three_letter)
      return kResidueCodes[i];
  return 0;
}

Conformer make_conformer(const chem::Molecule &m, std::vector<Vec3> coords) {
  if (static_cast<int>(coords.size()) != m.num_atoms())
    throw CountMismatch(std::to_string(coords.size()) +
                        " coordinates for " + std::to_string(m.num_atoms()) +
                        " atoms");
  bool has_h = false;
  for (const auto &a : m.atoms())
    has_h = has_h || a.atomic_number == 1;
  if (!has_h)
    return Conformer { m, std::move(coords) };

  chem::MoleculeBuilder b;
  std::vector<int> map(m.num_atoms(), -1);
  std::vector<Vec3> kept;
  for (int i = 0; i < m.num_atoms(); ++i) {
    if (m.atom(i).atomic_number == 1)
      continue;
    chem::Atom a = m.atom(i);
    for (const auto &nb : m.neighbors(i))
      if (m.atom(nb.atom).atomic_number == 1)
        ++a.h_count;
    a.bracket = true;
    map[i] = b.add_atom(a);
    kept.push_back(coords[i]);
  }
  for (const auto &bond : m.bonds())
    if (map[bond.begin] >= 0 && map[bond.end] >= 0)
      b.add_bond(map[bond.begin], map[bond.end], bond.order, bond.stereo);
  return Conformer { b.build(), std::move(kept) };
}

std::string format_coordinate(double value, int precision) {
  if (!std::isfinite(value))
    throw PrecisionOverflow("coordinate is not finite");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, value);
  std::string s(buf);
  std::size_t int_digits = s.find('.');
  if (int_digits == std::string::npos)
    int_digits = s.size();
  if (s[0] == '-')
    --int_digits;
  if (int_digits > 4)
    throw PrecisionOverflow("coordinate " + s + " exceeds the 4-digit field");
  if (s[0] == '-' &&
      s.find_first_not_of("0.", 1) == std::string::npos)
    s.erase(0, 1);
  return s;
}

std::string encode_conformer(const Conformer &c, int precision) {
  if (static_cast<int>(c.coords.size()) != c.molecule.num_atoms())
    throw CountMismatch("conformer has " + std::to_string(c.coords.size()) +
                        " coordinates for " +
                        std::to_string(c.molecule.num_atoms()) + " atoms");
  for (const auto &a : c.molecule.atoms())
    if (a.atomic_number == 1)
      throw FormatError("conformer contains explicit hydrogen atoms", 0);
  chem::SmilesOutput w = chem::write_smiles(c.molecule, {});
  std::string out = open_tag(Format::kSmiles) + w.smiles +
                    close_tag(Format::kSmiles);
  for (int atom : w.atom_order) {
    out += '\n';
    out += format_coordinate(c.coords[atom][0], precision);
    out += ' ';
    out += format_coordinate(c.coords[atom][1], precision);
    out += ' ';
    out += format_coordinate(c.coords[atom][2], precision);
  }
  return out;
}

Conformer decode_conformer(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  if (!lines.empty() && lines.back().empty() && lines.size() > 1)
    lines.pop_back();
  std::string open = open_tag(Format::kSmiles);
  std::string close = close_tag(Format::kSmiles);
  std::string_view first = lines[0];
  if (!first.starts_with(open) || !first.ends_with(close) ||
      first.size() < open.size() + close.size())
    throw FormatError("line 1: expected " + open + "SMILES" + close, 1);
  chem::Molecule m = chem::parse_smiles(
      first.substr(open.size(), first.size() - open.size() - close.size()));
  for (const auto &a : m.atoms())
    if (a.atomic_number == 1)
      throw FormatError("line 1: explicit hydrogen atoms", 1);
  std::vector<Vec3> coords;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::vector<std::string_view> f = split(lines[i], ' ');
    Vec3 v;
    if (f.size() != 3 || !parse_double(f[0], v[0]) ||
        !parse_double(f[1], v[1]) || !parse_double(f[2], v[2]))
      throw FormatError("line " + std::to_string(i + 1) +
                        ": expected \"x y z\"", i + 1);
    coords.push_back(v);
  }
  if (static_cast<int>(coords.size()) != m.num_atoms())
    throw CountMismatch(std::to_string(coords.size()) +
                        " coordinate lines for " +
                        std::to_string(m.num_atoms()) + " atoms");
  return Conformer { std::move(m), std::move(coords) };
}

std::string encode_protein(const ProteinStructure &p, int precision) {
  std::string out = open_tag(Format::kProtein3d);
  for (std::size_t r = 0; r < p.residues.size(); ++r) {
    const Residue &res = p.residues[r];
    if (kResidueCodes.find(res.type) == std::string_view::npos || res.type == 0)
      throw UnsupportedFeature("no residue token for '" +
                               std::string(1, res.type) + "'");
    if (r > 0)
      out += '\n';
    out += res.type;
    for (const auto &a : res.atoms) {
      if (is_hydrogen_name(a.name))
        continue;
      if (!known_atom_name(a.name))
        throw UnsupportedFeature("no atom-name token for '" + a.name + "'");
      out += ' ';
      out += a.name;
      append_xyz(out, a.xyz, precision);
    }
  }
  return out + close_tag(Format::kProtein3d);
}

ProteinStructure decode_protein(std::string_view text) {
  std::string open = open_tag(Format::kProtein3d);
  std::string close = close_tag(Format::kProtein3d);
  if (!text.starts_with(open) || !text.ends_with(close) ||
      text.size() < open.size() + close.size())
    throw FormatError("expected " + open + "..." + close, 1);
  std::string_view body =
      text.substr(open.size(), text.size() - open.size() - close.size());
  ProteinStructure p;
  if (body.empty())
    return p;
  std::vector<std::string_view> lines = split(body, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::size_t line = i + 1;
    std::vector<std::string_view> f = split(lines[i], ' ');
    if (f[0].size() != 1 ||
        kResidueCodes.find(f[0][0]) == std::string_view::npos)
      throw FormatError("line " + std::to_string(line) +
                        ": expected a one-letter residue code", line);
    if ((f.size() - 1) % 4 != 0)
      throw CountMismatch("line " + std::to_string(line) +
                          ": atom fields are not name/x/y/z groups");
    Residue res { f[0][0], {} };
    for (std::size_t k = 1; k < f.size(); k += 4) {
      ProteinAtom a { std::string(f[k]), {} };
      if (!known_atom_name(a.name))
        throw FormatError("line " + std::to_string(line) +
                          ": unknown atom name '" + a.name + "'", line);
      for (int c = 0; c < 3; ++c)
        if (!parse_double(f[k + 1 + c], a.xyz[c]))
          throw FormatError("line " + std::to_string(line) +
                            ": bad coordinate", line);
      res.atoms.push_back(std::move(a));
    }
    p.residues.push_back(std::move(res));
  }
  return p;
}

Conformer read_molfile(std::string_view text) {
  std::vector<std::string_view> lines = split(text, '\n');
  auto fail = [](std::size_t line, const std::string &msg) {
    throw FormatError("molfile line " + std::to_string(line) + ": " + msg,
                      line);
  };
  if (lines.size() < 4)
    fail(lines.size(), "missing counts line");
  std::string_view counts = lines[3];
  int n_atoms, n_bonds;
  if (counts.size() < 6 || !parse_int(counts.substr(0, 3), n_atoms) ||
      !parse_int(counts.substr(3, 3), n_bonds))
    fail(4, "bad counts line");
  if (lines.size() < static_cast<std::size_t>(4 + n_atoms + n_bonds))
    fail(lines.size(), "truncated atom or bond block");

  chem::MoleculeBuilder b;
  std::vector<Vec3> coords;
  for (int i = 0; i < n_atoms; ++i) {
    std::size_t ln = 5 + i;
    std::vector<std::string_view> f = words(lines[4 + i]);
    Vec3 v;
    if (f.size() < 4 || !parse_double(f[0], v[0]) ||
        !parse_double(f[1], v[1]) || !parse_double(f[2], v[2]))
      fail(ln, "bad atom line");
    const chem::ElementInfo *e = chem::find_element(f[3]);
    if (e == nullptr)
      throw UnsupportedFeature("molfile element '" + std::string(f[3]) + "'");
    chem::Atom a;
    a.atomic_number = e->atomic_number;
    int code = 0;
    if (f.size() > 5 && parse_int(f[5], code) && code >= 1 && code <= 7 &&
        code != 4)
      a.charge = 4 - code;
    b.add_atom(a);
    coords.push_back(v);
  }
  for (int i = 0; i < n_bonds; ++i) {
    std::size_t ln = 5 + n_atoms + i;
    std::string_view l = lines[4 + n_atoms + i];
    int x, y, order;
    if (l.size() < 9 || !parse_int(l.substr(0, 3), x) ||
        !parse_int(l.substr(3, 3), y) || !parse_int(l.substr(6, 3), order) ||
        x < 1 || y < 1 || x > n_atoms || y > n_atoms || order < 1 ||
        order > 4)
      fail(ln, "bad bond line");
    auto bo = static_cast<chem::BondOrder>(order);
    if (bo == chem::BondOrder::kAromatic) {
      b.atom(x - 1).aromatic = true;
      b.atom(y - 1).aromatic = true;
    }
    b.add_bond(x - 1, y - 1, bo);
  }
  for (std::size_t i = 4 + n_atoms + n_bonds; i < lines.size(); ++i) {
    std::string_view l = lines[i];
    if (l.starts_with("M  END"))
      break;
    if (!l.starts_with("M  CHG"))
      continue;
    std::vector<std::string_view> f = words(l.substr(6));
    int n;
    if (f.empty() || !parse_int(f[0], n) ||
        f.size() < static_cast<std::size_t>(1 + 2 * n))
      fail(i + 1, "bad M  CHG line");
    for (int k = 0; k < n; ++k) {
      int atom, charge;
      if (!parse_int(f[1 + 2 * k], atom) || !parse_int(f[2 + 2 * k], charge) ||
          atom < 1 || atom > n_atoms)
        fail(i + 1, "bad M  CHG entry");
      b.atom(atom - 1).charge = charge;
    }
  }
  return make_conformer(b.build(), std::move(coords));
}

ProteinStructure read_pdb(std::string_view text) {
  ProteinStructure p;
  std::string current;
  bool skipping = false;
  for (std::string_view l : split(text, '\n')) {
    if (l.starts_with("ENDMDL"))
      break;
    if (!l.starts_with("ATOM  ") || l.size() < 54)
      continue;
    char alt = l[16];
    if (alt != ' ' && alt != 'A')
      continue;
    std::string name(trim(l.substr(12, 4)));
    std::string_view res_name = trim(l.substr(17, 3));
    std::string key(l.substr(21, 6));
    std::string_view element = l.size() >= 78 ? trim(l.substr(76, 2)) : "";
    if (key != current) {
      current = key;
      char code = residue_code(res_name);
      skipping = code == 0;
      if (!skipping)
        p.residues.push_back(Residue { code, {} });
    }
    if (skipping)
      continue;
    if (element == "H" || element == "D" ||
        (element.empty() && is_hydrogen_name(name)))
      continue;
    ProteinAtom a { name, {} };
    for (int c = 0; c < 3; ++c)
      if (!parse_double(l.substr(30 + 8 * c, 8), a.xyz[c]))
        throw FormatError("bad PDB coordinate in atom " + name, 0);
    p.residues.back().atoms.push_back(std::move(a));
  }
  return p;
}

}  // namespace chemgym
