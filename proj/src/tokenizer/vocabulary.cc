//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/tokenizer/vocabulary.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "chemgym/chem/element.h"
#include "chemgym/chem/selfies.h"
#include "chemgym/error.h"

namespace chemgym {

namespace {

constexpr std::array<std::string_view, 5> kFormatNames {
  "smiles", "selfies", "fasta", "protein3d", "iupac",
};

constexpr std::array<std::string_view, 3> kRoleMarkers {
  "<|system|>", "<|user|>", "<|assistant|>",
};

constexpr std::array<std::string_view, 5> kPrefixes {
  "sm_", "sf_", "fasta_", "am_", "atom_name_",
};

std::vector<std::string> digits() {
  std::vector<std::string> out;
  for (char c = '0'; c <= '9'; ++c)
    out.emplace_back(1, c);
  return out;
}

std::vector<std::string> make_organic() {
  std::vector<std::string> out {
    "B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I",
    "b", "c", "n", "o", "p", "s",
  };
  for (auto &d : digits())
    out.push_back(d);
  for (int i = 10; i < 100; ++i)
    out.push_back("%" + std::to_string(i));
  for (const char *s : { "-", "=", "#", ":", "/", "\\", "(", ")", ".", "[" })
    out.emplace_back(s);
  return out;
}

std::vector<std::string> make_bracket() {
  std::vector<std::string> out;
  for (const auto &e : chem::supported_elements())
    out.emplace_back(e.symbol);
  for (const char *s : { "b", "c", "n", "o", "p", "s", "se", "as", "te" })
    out.emplace_back(s);
  for (auto &d : digits())
    out.push_back(d);
  for (const char *s : { "@", "@@", "+", "-", "]" })
    out.emplace_back(s);
  return out;
}

std::vector<std::string> make_smiles() {
  std::vector<std::string> out = make_organic();
  std::set<std::string> seen(out.begin(), out.end());
  for (auto &s : make_bracket())
    if (seen.insert(s).second)
      out.push_back(s);
  return out;
}

std::vector<std::string> make_fasta() {
  std::vector<std::string> out;
  for (char c = 'A'; c <= 'Z'; ++c)
    out.emplace_back(1, c);
  out.emplace_back("*");
  out.emplace_back("-");
  return out;
}

std::vector<std::string> make_residues() {
  std::vector<std::string> out;
  for (char c : std::string_view("ARNDCQEGHILKMFPSTWYV"))
    out.emplace_back(1, c);
  return out;
}

std::vector<std::string> make_atom_names() {
  return {
    "N", "CA", "C", "O", "CB", "CG", "CG1", "CG2", "CD", "CD1", "CD2", "CE",
    "CE1", "CE2", "CE3", "CZ", "CZ2", "CZ3", "CH2", "NE", "NE1", "NE2", "ND1",
    "ND2", "NZ", "NH1", "NH2", "OG", "OG1", "OD1", "OD2", "OE1", "OE2", "OH",
    "SG", "SD", "OXT",
  };
}

std::string byte_name(int b) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "<0x%02X>", b);
  return buf;
}

std::string escape(std::string_view s) {
  std::string out;
  if (s.starts_with('#'))
    out += '\\';
  for (char c : s) {
    switch (c) {
    case '\n': out += "\\n"; break;
    case '\t': out += "\\t"; break;
    case '\\': out += "\\\\"; break;
    default: out += c;
    }
  }
  return out;
}

std::string unescape(std::string_view s, std::size_t line) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\') {
      out += s[i];
      continue;
    }
    if (i + 1 == s.size())
      throw VocabularyError("line " + std::to_string(line) +
                            ": dangling backslash");
    char c = s[++i];
    if (c == 'n')
      out += '\n';
    else if (c == 't')
      out += '\t';
    else if (c == '\\')
      out += '\\';
    else if (c == '#' && i == 1)
      out += '#';
    else
      throw VocabularyError("line " + std::to_string(line) +
                            ": unknown escape \\" + std::string(1, c));
  }
  return out;
}

}  // namespace

std::string_view format_name(Format f) noexcept {
  return kFormatNames[static_cast<int>(f)];
}

std::optional<Format> parse_format(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kFormatNames.size(); ++i)
    if (kFormatNames[i] == name)
      return static_cast<Format>(i);
  return std::nullopt;
}

std::string open_tag(Format f) {
  return "<" + std::string(format_name(f)) + ">";
}

std::string close_tag(Format f) {
  return "</" + std::string(format_name(f)) + ">";
}

std::string_view role_marker(Role r) noexcept {
  return kRoleMarkers[static_cast<int>(r)];
}

std::string_view inventory_prefix(ChemInventory inv) noexcept {
  return kPrefixes[static_cast<int>(inv)];
}

const std::vector<std::string> &smiles_organic_symbols() {
  static const std::vector<std::string> v = make_organic();
  return v;
}

const std::vector<std::string> &smiles_bracket_symbols() {
  static const std::vector<std::string> v = make_bracket();
  return v;
}

const std::vector<std::string> &inventory_symbols(ChemInventory inv) {
  static const std::vector<std::string> smiles = make_smiles();
  static const std::vector<std::string> fasta = make_fasta();
  static const std::vector<std::string> residues = make_residues();
  static const std::vector<std::string> atoms = make_atom_names();
  switch (inv) {
  case ChemInventory::kSmiles: return smiles;
  case ChemInventory::kSelfies: return chem::selfies_alphabet();
  case ChemInventory::kFasta: return fasta;
  case ChemInventory::kResidue: return residues;
  case ChemInventory::kAtomName: return atoms;
  }
  return smiles;
}

std::string check_smiles_inventory() {
  const auto &organic = smiles_organic_symbols();
  const auto &bracket = smiles_bracket_symbols();
  auto is_element = [](const std::string &s) {
    return std::isalpha(static_cast<unsigned char>(s[0])) != 0;
  };
  // Symbols that may directly follow `x` inside a bracket atom.
  auto bracket_follow = [&](const std::string &x) {
    std::vector<std::string> out;
    bool digit = std::isdigit(static_cast<unsigned char>(x[0])) != 0;
    for (const auto &z : bracket) {
      if (digit || x == "[") {
        out.push_back(z);  // isotope digits or element
      } else if (x == "@") {
        if (z != "@" && z != "@@")
          out.push_back(z);
      } else if (is_element(x)) {
        if (!is_element(z) || z == "H")
          out.push_back(z);
      } else if (!is_element(z)) {
        out.push_back(z);
      }
    }
    return out;
  };
  auto check = [](const std::vector<std::string> &symbols, auto follow,
                  const char *context) -> std::string {
    for (const auto &x : symbols) {
      for (const auto &y : symbols) {
        if (y.size() <= x.size() || y.compare(0, x.size(), x) != 0)
          continue;
        std::string rest = y.substr(x.size());
        for (const auto &z : follow(x)) {
          if (z.starts_with(rest) || rest.starts_with(z))
            return std::string(context) + " symbols '" + x + "' + '" + z +
                   "' overlap '" + y + "'";
        }
      }
    }
    return {};
  };
  std::string err = check(
      organic, [&](const std::string &) { return organic; }, "organic");
  if (err.empty())
    err = check(bracket, bracket_follow, "bracket");
  return err;
}

Vocabulary Vocabulary::with_default_text() {
  std::vector<std::pair<std::string, int>> tokens;
  for (int c = 0x20; c < 0x7f; ++c)
    tokens.emplace_back(std::string(1, static_cast<char>(c)),
                        static_cast<int>(tokens.size()));
  tokens.emplace_back("\n", static_cast<int>(tokens.size()));
  tokens.emplace_back("\t", static_cast<int>(tokens.size()));
  return from_text_tokens(tokens);
}

Vocabulary Vocabulary::from_text_tokens(
    const std::vector<std::pair<std::string, int>> &tokens) {
  return assemble(tokens, std::nullopt);
}

Vocabulary Vocabulary::parse(std::istream &in) {
  std::vector<std::pair<std::string, int>> entries;
  std::optional<int> reserved;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty())
      continue;
    std::size_t tab = line.rfind('\t');
    if (line[0] == '#') {
      if (line.starts_with("#reserved_start\t"))
        reserved = std::stoi(line.substr(tab + 1));
      continue;
    }
    if (tab == std::string::npos || tab == 0)
      throw VocabularyError("line " + std::to_string(lineno) +
                            ": expected token<TAB>id");
    int id;
    try {
      std::size_t used = 0;
      id = std::stoi(line.substr(tab + 1), &used);
      if (used != line.size() - tab - 1)
        throw std::invalid_argument("trailing");
    } catch (const std::exception &) {
      throw VocabularyError("line " + std::to_string(lineno) + ": bad id");
    }
    entries.emplace_back(unescape(std::string_view(line).substr(0, tab), lineno),
                         id);
  }
  return assemble(entries, reserved);
}

Vocabulary Vocabulary::load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open vocabulary file " + path);
  return parse(in);
}

Vocabulary Vocabulary::assemble(
    const std::vector<std::pair<std::string, int>> &entries,
    std::optional<int> reserved_start) {
  if (std::string err = check_smiles_inventory(); !err.empty())
    throw VocabularyError("ambiguous SMILES inventory: " + err);

  // Every non-text token, keyed by name.
  std::map<std::string, TokenInfo> specials;
  std::vector<std::string> special_order, byte_order, chem_order;
  for (Format f : kTaggedFormats) {
    TokenInfo open { open_tag(f), open_tag(f), TokenKind::kOpenTag };
    open.format = f;
    TokenInfo close { close_tag(f), close_tag(f), TokenKind::kCloseTag };
    close.format = f;
    special_order.push_back(open.name);
    special_order.push_back(close.name);
    specials.emplace(open.name, open);
    specials.emplace(close.name, close);
  }
  for (Role r : { Role::kSystem, Role::kUser, Role::kAssistant }) {
    TokenInfo t { std::string(role_marker(r)), std::string(role_marker(r)),
                  TokenKind::kRole };
    t.role = r;
    special_order.push_back(t.name);
    specials.emplace(t.name, t);
  }
  for (int b = 0; b < 256; ++b) {
    TokenInfo t { byte_name(b), std::string(1, static_cast<char>(b)),
                  TokenKind::kByte };
    byte_order.push_back(t.name);
    specials.emplace(t.name, t);
  }
  for (int k = 0; k < 5; ++k) {
    auto inv = static_cast<ChemInventory>(k);
    for (const auto &s : inventory_symbols(inv)) {
      TokenInfo t { std::string(inventory_prefix(inv)) + s, s,
                    TokenKind::kChem };
      t.inventory = inv;
      chem_order.push_back(t.name);
      specials.emplace(t.name, t);
    }
  }

  std::map<int, TokenInfo> by_id;
  std::set<std::string> names;
  std::size_t chem_listed = 0;
  for (const auto &[name, id] : entries) {
    if (name.empty())
      throw VocabularyError("empty token");
    if (id < 0)
      throw VocabularyError("negative id for token '" + escape(name) + "'");
    if (!names.insert(name).second)
      throw VocabularyError("duplicate token '" + escape(name) + "'");
    TokenInfo t;
    if (auto it = specials.find(name); it != specials.end()) {
      t = it->second;
      if (t.kind == TokenKind::kChem)
        ++chem_listed;
    } else {
      t = TokenInfo { name, name, TokenKind::kText };
    }
    if (!by_id.emplace(id, std::move(t)).second)
      throw VocabularyError("duplicate id " + std::to_string(id));
  }
  if (chem_listed != 0 && chem_listed != chem_order.size())
    throw VocabularyError("vocabulary lists " + std::to_string(chem_listed) +
                          " of " + std::to_string(chem_order.size()) +
                          " chemical tokens");

  int next = by_id.empty() ? 0 : by_id.rbegin()->first + 1;
  auto append = [&](const std::vector<std::string> &order) {
    for (const auto &name : order) {
      if (names.count(name))
        continue;
      names.insert(name);
      by_id.emplace(next++, specials.at(name));
    }
  };
  append(special_order);
  append(byte_order);
  append(chem_order);

  if (by_id.rbegin()->first + 1 != static_cast<int>(by_id.size()))
    throw VocabularyError("token ids are not dense 0.." +
                          std::to_string(by_id.size() - 1));

  Vocabulary v;
  for (auto &[id, t] : by_id)
    v.tokens_.push_back(std::move(t));
  v.index();

  int lo = v.size(), hi = -1;
  for (int id = 0; id < v.size(); ++id) {
    if (v.tokens_[id].kind == TokenKind::kChem) {
      lo = std::min(lo, id);
      hi = std::max(hi, id);
    }
  }
  if (hi - lo + 1 != static_cast<int>(chem_order.size()))
    throw VocabularyError("chemical token ids are not contiguous");
  v.chem_range_ = { lo, hi + 1 };
  if (reserved_start && *reserved_start != lo)
    throw VocabularyError("chemical tokens start at " + std::to_string(lo) +
                          ", header says " +
                          std::to_string(*reserved_start));
  return v;
}

void Vocabulary::index() {
  std::size_t max_len = 0;
  for (int id = 0; id < size(); ++id) {
    const TokenInfo &t = tokens_[id];
    by_name_.emplace(t.name, id);
    switch (t.kind) {
    case TokenKind::kText:
      text_.emplace(t.surface, id);
      max_len = std::max(max_len, t.surface.size());
      break;
    case TokenKind::kByte:
      byte_[static_cast<unsigned char>(t.surface[0])] = id;
      break;
    case TokenKind::kOpenTag: open_[static_cast<int>(t.format)] = id; break;
    case TokenKind::kCloseTag: close_[static_cast<int>(t.format)] = id; break;
    case TokenKind::kRole: role_[static_cast<int>(t.role)] = id; break;
    case TokenKind::kChem:
      chem_[static_cast<int>(t.inventory)].emplace(t.surface, id);
      break;
    }
  }
  text_lengths_.assign(max_len + 1, 0);
  for (const auto &[s, id] : text_)
    text_lengths_[s.size()] = 1;
}

void Vocabulary::save(std::ostream &out) const {
  out << "#reserved_start\t" << chem_range_.first << '\n';
  for (int id = 0; id < size(); ++id)
    out << escape(tokens_[id].name) << '\t' << id << '\n';
}

std::optional<int> Vocabulary::find(std::string_view name) const {
  auto it = by_name_.find(std::string(name));
  if (it == by_name_.end())
    return std::nullopt;
  return it->second;
}

std::optional<int> Vocabulary::chem_id(ChemInventory inv,
                                       std::string_view surface) const {
  const auto &m = chem_[static_cast<int>(inv)];
  auto it = m.find(std::string(surface));
  if (it == m.end())
    return std::nullopt;
  return it->second;
}

std::pair<int, std::size_t> Vocabulary::match_text(std::string_view text) const {
  std::size_t n = std::min(text.size(), text_lengths_.size() - 1);
  std::string key;
  for (std::size_t len = n; len > 0; --len) {
    if (!text_lengths_[len])
      continue;
    key.assign(text.substr(0, len));
    if (auto it = text_.find(key); it != text_.end())
      return { it->second, len };
  }
  return { -1, 0 };
}

}  // namespace chemgym
