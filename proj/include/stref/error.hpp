// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace stref {

// Error kinds used across the library. The spelled names are part of the
// engine wire format (`ERROR line=<n> kind=<k>`), so they must stay stable.
enum class ErrKind {
  LexError,
  ParseError,
  LiteralError,
  TypeError,
  ConvertError,
  DomainError,
  DivisionByZero,
  IndexOutOfRange,
  UnboundVariable,
  RedeclarationError,
  ConstError,
  DefaultError,
  SemanticError,
  EmptyStack,
  ArityError,
  UnknownPOU,
  NotInstantiated,
  UnknownField,
  EntryNotFound,
  RecursionError,
  NoApplicableSite,
  AdapterError,
  IOError,
  EngineCrash,
};

const char* to_string(ErrKind k);
std::optional<ErrKind> err_kind_from_string(std::string_view s);

// Single exception type; `line`/`column` are 1-based and 0 when unknown.
class Error : public std::runtime_error {
public:
  Error(ErrKind kind, std::string message, int line = 0, int column = 0)
      : std::runtime_error(std::move(message)), kind(kind), line(line), column(column) {}

  ErrKind kind;
  int line;
  int column;
  // Once an executing statement stamps its own line onto the error, outer
  // statements must not overwrite it (Outcome reports the innermost one).
  bool line_pinned = false;
};

}  // namespace stref
