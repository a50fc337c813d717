//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_TOKENIZER_VOCABULARY_H_
#define CHEMGYM_TOKENIZER_VOCABULARY_H_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chemgym {

enum class Format {
  kSmiles,
  kSelfies,
  kFasta,
  kProtein3d,
  kIupac,
};

inline constexpr std::array kTaggedFormats {
  Format::kSmiles, Format::kSelfies, Format::kFasta, Format::kProtein3d,
  Format::kIupac,
};

std::string_view format_name(Format f) noexcept;
std::optional<Format> parse_format(std::string_view name) noexcept;
std::string open_tag(Format f);
std::string close_tag(Format f);

enum class Role {
  kSystem,
  kUser,
  kAssistant,
};

std::string_view role_marker(Role r) noexcept;  // "<|user|>", ...

// Sub-inventories of chemical tokens; each has a token-name prefix.
enum class ChemInventory {
  kSmiles,    // sm_
  kSelfies,   // sf_
  kFasta,     // fasta_
  kResidue,   // am_
  kAtomName,  // atom_name_
};

std::string_view inventory_prefix(ChemInventory inv) noexcept;

// Surface symbols of each inventory, in vocabulary order.
const std::vector<std::string> &inventory_symbols(ChemInventory inv);

// SMILES symbols valid outside / inside brackets.
const std::vector<std::string> &smiles_organic_symbols();
const std::vector<std::string> &smiles_bracket_symbols();

enum class TokenKind {
  kText,
  kByte,
  kOpenTag,
  kCloseTag,
  kRole,
  kChem,
};

struct TokenInfo {
  std::string name;     // as written in the vocabulary file
  std::string surface;  // bytes it stands for in text
  TokenKind kind;
  Format format = Format::kSmiles;                   // tags
  Role role = Role::kUser;                           // role markers
  ChemInventory inventory = ChemInventory::kSmiles;  // chem tokens
};

/// Token inventory: externally supplied text tokens, 256 byte-fallback tokens
/// (<0x00> ... <0xFF>), format tags, role markers, and the chemical tokens,
/// which occupy one contiguous id range.
///
/// File format: one `token<TAB>id` per line. In token names `\n`, `\t` and
/// `\\` stand for newline, tab and backslash, and a leading `\#` for '#'.
/// Lines starting with '#' are comments, except `#reserved_start<TAB>N`,
/// which asserts the first id of the chemical range. Tags, role markers, byte
/// and chemical tokens are recognised by name; everything else is a text
/// token. Tokens missing from the file are appended after the largest id
/// (tags and roles, then bytes, then the chemical range). Ids must end up
/// dense. Throws VocabularyError for
/// duplicate tokens or ids, gaps, a partial or non-contiguous chemical range,
/// a header mismatch, or an ambiguous symbol inventory.
class Vocabulary {
public:
  // Text tokens: every printable ASCII character plus newline and tab.
  static Vocabulary with_default_text();
  static Vocabulary from_text_tokens(
      const std::vector<std::pair<std::string, int>> &tokens);
  static Vocabulary parse(std::istream &in);
  static Vocabulary load(const std::string &path);

  // Writes every token, sorted by id, in the file format above.
  void save(std::ostream &out) const;

  int size() const noexcept { return static_cast<int>(tokens_.size()); }
  bool valid(int id) const noexcept { return id >= 0 && id < size(); }
  const TokenInfo &info(int id) const { return tokens_[id]; }
  std::optional<int> find(std::string_view name) const;

  int open_tag_id(Format f) const { return open_[static_cast<int>(f)]; }
  int close_tag_id(Format f) const { return close_[static_cast<int>(f)]; }
  int role_id(Role r) const { return role_[static_cast<int>(r)]; }
  int byte_id(unsigned char b) const { return byte_[b]; }
  std::optional<int> chem_id(ChemInventory inv, std::string_view surface) const;
  std::pair<int, int> chem_range() const { return chem_range_; }

  // Longest text token matching at the start of `text`: (id, length), or
  // (-1, 0).
  std::pair<int, std::size_t> match_text(std::string_view text) const;

private:
  Vocabulary() = default;
  static Vocabulary assemble(
      const std::vector<std::pair<std::string, int>> &entries,
      std::optional<int> reserved_start);
  void index();

  std::vector<TokenInfo> tokens_;
  std::unordered_map<std::string, int> by_name_;
  std::unordered_map<std::string, int> text_;
  std::vector<char> text_lengths_;  // text_lengths_[n] != 0 if some token has n bytes
  std::array<std::unordered_map<std::string, int>, 5> chem_;
  std::array<int, 5> open_ {}, close_ {};
  std::array<int, 3> role_ {};
  std::array<int, 256> byte_ {};
  std::pair<int, int> chem_range_ { 0, 0 };
};

// Verifies that greedy longest-match segmentation of SMILES spans is
// unambiguous: whenever one symbol is a proper prefix of another, its
// remainder cannot start a symbol allowed to follow the shorter one. Returns
// a description of the first conflict, or an empty string.
std::string check_smiles_inventory();

}  // namespace chemgym

#endif  // CHEMGYM_TOKENIZER_VOCABULARY_H_
