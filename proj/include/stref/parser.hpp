// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "stref/ast.hpp"

namespace stref {

// Parses one compilation unit (TYPE declarations + POUs). Every AST node
// keeps the source line of its first token. Throws Error(ParseError) with
// "expected X, found Y" diagnostics; Error(LexError) comes from tokenize.
SourceUnit parse_source(std::string_view source);

// Parses a single expression followed by end of input (test/tool helper).
ExprPtr parse_expression(std::string_view source);

}  // namespace stref
