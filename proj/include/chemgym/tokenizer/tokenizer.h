//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_TOKENIZER_TOKENIZER_H_
#define CHEMGYM_TOKENIZER_TOKENIZER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "chemgym/tokenizer/vocabulary.h"

namespace chemgym {

// Token-index range [start, end) of one isolated span, tags included.
struct FormatSpan {
  Format format;
  std::size_t start;
  std::size_t end;

  bool operator==(const FormatSpan &) const = default;
};

struct TokenSequence {
  std::vector<int> ids;
  std::vector<FormatSpan> spans;
};

struct TokenizeOptions {
  // Tag-delimited spans in system and user turns become chemical tokens. The
  // assistant turn is always isolated.
  bool isolate_inputs = true;
};

/// Turns text into token ids.
///
/// Role markers (<|system|>, <|user|>, <|assistant|>) switch the current
/// turn; text before the first marker belongs to the user. In isolated turns
/// each <fmt>...</fmt> span is segmented with the symbols of its format
/// (SMILES by longest match with separate inventories outside and inside
/// brackets, SELFIES one bracketed symbol per token, FASTA one residue per
/// token, protein3d as residue and atom-name tokens with text coordinates,
/// IUPAC as text). Everything else uses greedy longest-match text tokens
/// with byte fallback. Positions in errors are byte offsets.
///
/// Throws UnbalancedTag for a stray closing tag or an unterminated span, and
/// UnknownChemicalSymbol for a span that cannot be segmented.
TokenSequence tokenize(std::string_view text, const Vocabulary &vocab,
                       const TokenizeOptions &options = {});

// Concatenates token surfaces. Throws UnknownId (position = index in ids).
std::string detokenize(std::span<const int> ids, const Vocabulary &vocab);

// Token names, for display.
std::vector<std::string> token_names(std::span<const int> ids,
                                     const Vocabulary &vocab);

}  // namespace chemgym

#endif  // CHEMGYM_TOKENIZER_TOKENIZER_H_
