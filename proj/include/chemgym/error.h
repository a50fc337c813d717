//
// chemgym - Copyright 2026 The chemgym Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef CHEMGYM_ERROR_H_
#define CHEMGYM_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace chemgym {

// Base class of every error raised by the library. code() is a stable
// machine-readable identifier (used by the CLI for --json-errors).
class Error: public std::runtime_error {
public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(message), code_(std::move(code)) { }

  const std::string &code() const noexcept { return code_; }

private:
  std::string code_;
};

// Errors that carry a position (byte offset or line number) into their input.
class PositionedError: public Error {
public:
  PositionedError(std::string code, const std::string &message,
                  std::size_t position)
      : Error(std::move(code), message), position_(position) { }

  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

#define CHEMGYM_DEFINE_ERROR(Name, Base, code_str)                             \
  class Name: public Base {                                                    \
  public:                                                                      \
    template <class... Args>                                                   \
    explicit Name(Args &&...args)                                              \
        : Base(code_str, std::forward<Args>(args)...) { }                      \
  }

// chem / selfies
CHEMGYM_DEFINE_ERROR(SyntaxError, PositionedError, "SyntaxError");
CHEMGYM_DEFINE_ERROR(ValenceError, Error, "ValenceError");
CHEMGYM_DEFINE_ERROR(UnsupportedFeature, Error, "UnsupportedFeature");
CHEMGYM_DEFINE_ERROR(LengthMismatch, Error, "LengthMismatch");
CHEMGYM_DEFINE_ERROR(SymbolError, PositionedError, "SymbolError");

// tokenizer
CHEMGYM_DEFINE_ERROR(UnbalancedTag, PositionedError, "UnbalancedTag");
CHEMGYM_DEFINE_ERROR(UnknownChemicalSymbol, PositionedError,
                     "UnknownChemicalSymbol");
CHEMGYM_DEFINE_ERROR(UnknownId, PositionedError, "UnknownId");
CHEMGYM_DEFINE_ERROR(VocabularyError, Error, "VocabularyError");

// spatial
CHEMGYM_DEFINE_ERROR(PrecisionOverflow, Error, "PrecisionOverflow");
CHEMGYM_DEFINE_ERROR(CountMismatch, Error, "CountMismatch");
CHEMGYM_DEFINE_ERROR(FormatError, PositionedError, "FormatError");

// sampler / tasks
CHEMGYM_DEFINE_ERROR(SchemaError, PositionedError, "SchemaError");
CHEMGYM_DEFINE_ERROR(EmptyCategory, Error, "EmptyCategory");
CHEMGYM_DEFINE_ERROR(EmptyTask, Error, "EmptyTask");
CHEMGYM_DEFINE_ERROR(ConfigError, Error, "ConfigError");
CHEMGYM_DEFINE_ERROR(IoError, Error, "IoError");

// rewards
CHEMGYM_DEFINE_ERROR(DegenerateRange, Error, "DegenerateRange");
CHEMGYM_DEFINE_ERROR(GroupTooSmall, Error, "GroupTooSmall");

// eval
CHEMGYM_DEFINE_ERROR(MissingPlaceholder, Error, "MissingPlaceholder");
CHEMGYM_DEFINE_ERROR(AmbiguousLabelTokens, Error, "AmbiguousLabelTokens");
CHEMGYM_DEFINE_ERROR(AllInvalid, Error, "AllInvalid");
CHEMGYM_DEFINE_ERROR(DegenerateInput, Error, "DegenerateInput");
CHEMGYM_DEFINE_ERROR(ProviderError, Error, "ProviderError");

// hybrid_ops
CHEMGYM_DEFINE_ERROR(ShapeMismatch, Error, "ShapeMismatch");

#undef CHEMGYM_DEFINE_ERROR

}  // namespace chemgym

#endif  // CHEMGYM_ERROR_H_
