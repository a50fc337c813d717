//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "chemgym/tokenizer/tokenizer.h"

#include <algorithm>

#include "chemgym/error.h"

namespace chemgym {

namespace {

class Segmenter {
public:
  Segmenter(const Vocabulary &vocab, std::vector<int> &out)
      : vocab_(vocab), out_(out) { }

  void text(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      auto [id, len] = vocab_.match_text(s.substr(i));
      if (id < 0) {
        out_.push_back(vocab_.byte_id(static_cast<unsigned char>(s[i])));
        ++i;
      } else {
        out_.push_back(id);
        i += len;
      }
    }
  }

  // `base` is the byte offset of `s` in the full input.
  void span(Format f, std::string_view s, std::size_t base) {
    switch (f) {
    case Format::kSmiles: smiles(s, base); break;
    case Format::kSelfies: selfies(s, base); break;
    case Format::kFasta: fasta(s, base); break;
    case Format::kProtein3d: protein3d(s, base); break;
    case Format::kIupac: text(s); break;
    }
  }

private:
  [[noreturn]] void unknown(std::string_view what, std::size_t pos) {
    throw UnknownChemicalSymbol("unknown " + std::string(what) + " symbol", pos);
  }

  void smiles(std::string_view s, std::size_t base) {
    const auto &organic = smiles_organic_symbols();
    const auto &bracket = smiles_bracket_symbols();
    bool inside = false;
    std::size_t i = 0;
    while (i < s.size()) {
      const auto &symbols = inside ? bracket : organic;
      std::size_t best = 0;
      for (const auto &sym : symbols)
        if (sym.size() > best && s.substr(i).starts_with(sym))
          best = sym.size();
      if (best == 0)
        unknown("SMILES", base + i);
      std::string_view sym = s.substr(i, best);
      out_.push_back(*vocab_.chem_id(ChemInventory::kSmiles, sym));
      if (sym == "[")
        inside = true;
      else if (sym == "]")
        inside = false;
      i += best;
    }
  }

  void selfies(std::string_view s, std::size_t base) {
    std::size_t i = 0;
    while (i < s.size()) {
      std::size_t len = 1;
      if (s[i] == '[') {
        std::size_t close = s.find(']', i);
        if (close == std::string_view::npos)
          unknown("SELFIES", base + i);
        len = close - i + 1;
      }
      auto id = vocab_.chem_id(ChemInventory::kSelfies, s.substr(i, len));
      if (!id)
        unknown("SELFIES", base + i);
      out_.push_back(*id);
      i += len;
    }
  }

  void fasta(std::string_view s, std::size_t base) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      auto id = vocab_.chem_id(ChemInventory::kFasta, s.substr(i, 1));
      if (!id)
        unknown("FASTA", base + i);
      out_.push_back(*id);
    }
  }

  // One residue per line: "<residue> <atom> <x> <y> <z> <atom> ...".
  void protein3d(std::string_view s, std::size_t base) {
    std::size_t i = 0;
    int field = 0;
    while (i < s.size()) {
      char c = s[i];
      if (c == '\n' || c == ' ') {
        std::size_t j = i;
        while (j < s.size() && (s[j] == ' ' || s[j] == '\n'))
          ++j;
        if (s.substr(i, j - i).find('\n') != std::string_view::npos)
          field = 0;
        text(s.substr(i, j - i));
        i = j;
        continue;
      }
      std::size_t j = std::min(s.find_first_of(" \n", i), s.size());
      std::string_view word = s.substr(i, j - i);
      if (field == 0) {
        auto id = vocab_.chem_id(ChemInventory::kResidue, word);
        if (!id)
          unknown("residue", base + i);
        out_.push_back(*id);
      } else if ((field - 1) % 4 == 0) {
        auto id = vocab_.chem_id(ChemInventory::kAtomName, word);
        if (!id)
          unknown("atom name", base + i);
        out_.push_back(*id);
      } else {
        text(word);
      }
      ++field;
      i = j;
    }
  }

  const Vocabulary &vocab_;
  std::vector<int> &out_;
};

bool starts_with_at(std::string_view s, std::size_t pos, std::string_view p) {
  return s.substr(pos).starts_with(p);
}

}  // namespace

TokenSequence tokenize(std::string_view text, const Vocabulary &vocab,
                       const TokenizeOptions &options) {
  TokenSequence seq;
  Segmenter seg(vocab, seq.ids);
  Role role = Role::kUser;
  std::size_t pos = 0, run = 0;
  auto flush = [&](std::size_t end) {
    seg.text(text.substr(run, end - run));
  };
  while (pos < text.size()) {
    if (text[pos] != '<') {
      ++pos;
      continue;
    }
    bool handled = false;
    for (Role r : { Role::kSystem, Role::kUser, Role::kAssistant }) {
      std::string_view marker = role_marker(r);
      if (starts_with_at(text, pos, marker)) {
        flush(pos);
        seq.ids.push_back(vocab.role_id(r));
        role = r;
        pos += marker.size();
        run = pos;
        handled = true;
        break;
      }
    }
    if (handled)
      continue;
    bool isolate = role == Role::kAssistant || options.isolate_inputs;
    if (isolate) {
      for (Format f : kTaggedFormats) {
        std::string open = open_tag(f), close = close_tag(f);
        if (starts_with_at(text, pos, close))
          throw UnbalancedTag("closing tag " + close + " without opening tag",
                              pos);
        if (!starts_with_at(text, pos, open))
          continue;
        std::size_t body = pos + open.size();
        std::size_t end = text.find(close, body);
        if (end == std::string_view::npos)
          throw UnbalancedTag("unterminated " + open, pos);
        flush(pos);
        FormatSpan span { f, seq.ids.size(), 0 };
        seq.ids.push_back(vocab.open_tag_id(f));
        seg.span(f, text.substr(body, end - body), body);
        seq.ids.push_back(vocab.close_tag_id(f));
        span.end = seq.ids.size();
        seq.spans.push_back(span);
        pos = end + close.size();
        run = pos;
        handled = true;
        break;
      }
    }
    if (!handled)
      ++pos;
  }
  flush(text.size());
  return seq;
}

std::string detokenize(std::span<const int> ids, const Vocabulary &vocab) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!vocab.valid(ids[i]))
      throw UnknownId("unknown token id " + std::to_string(ids[i]), i);
    out += vocab.info(ids[i]).surface;
  }
  return out;
}

std::vector<std::string> token_names(std::span<const int> ids,
                                     const Vocabulary &vocab) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!vocab.valid(ids[i]))
      throw UnknownId("unknown token id " + std::to_string(ids[i]), i);
    out.push_back(vocab.info(ids[i]).name);
  }
  return out;
}

}  // namespace chemgym
