// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace stref {

enum class TokKind {
  Keyword,
  Identifier,
  IntLit,
  FloatLit,
  StringLit,   // single-quoted, payload already unescaped
  WStringLit,  // double-quoted, payload already unescaped
  TypedLit,    // full text kept, e.g. "TOD#23:45:56.30" or "16#FF"
  Op,
  Punct,
  Eof,
};

struct Token {
  TokKind kind;
  std::string text;
  int line = 1;    // 1-based
  int column = 1;  // 1-based
};

// Keywords are recognized in upper case only; anything else matching
// [a-zA-Z_][a-zA-Z0-9_]* is an identifier.
bool is_keyword(std::string_view word);

// Lexes the whole source; the returned stream always ends with an Eof token.
// Throws Error(LexError) on illegal characters and unterminated
// strings/comments. Comments `(* *)` (nesting allowed) and `//` are dropped.
std::vector<Token> tokenize(std::string_view source);

}  // namespace stref
