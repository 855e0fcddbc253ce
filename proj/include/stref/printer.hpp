// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "stref/ast.hpp"

namespace stref {

// Canonical source emission. Deterministic; parse_source(pretty_print(u))
// is structurally equal to u. Grouping parentheses are re-derived from
// operator precedence, so the emitted text is a normal form.
std::string pretty_print(const SourceUnit& unit);
std::string pretty_print(const Expr& e);
std::string pretty_print(const Stmt& s, int indent = 0);
std::string pretty_print(const TypeExpr& t);

// Structural equality via the canonical form (positions are ignored).
bool ast_equal(const SourceUnit& a, const SourceUnit& b);

}  // namespace stref
