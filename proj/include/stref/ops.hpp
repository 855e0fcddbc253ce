// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "stref/ast.hpp"
#include "stref/value.hpp"

namespace stref {

// Arithmetic: + - * / ** MOD on numerics, plus the time-typed combinations
// TOD+-TIME, DT+-TIME, TIME+-TIME and DATE-DATE -> TIME.
//
// Integer results are computed exactly and wrapped to the result type (the
// wider operand's type); `/` truncates toward zero; MOD takes the dividend's
// sign; `**` with integer operands needs exponent >= 0.
Value arith(BinOp op, const Value& a, const Value& b);

// Comparisons; integers compare exactly, int/float mixes promote to float,
// strings compare by code unit, BOOL supports = and <> only.
Value compare(BinOp op, const Value& a, const Value& b);

// Value combination for AND/&/AND_THEN/XOR/OR/OR_ELSE: BOOL truth table or
// same-width bitstring bitwise op. Short-circuiting lives in the evaluator.
Value logic(BinOp op, const Value& a, const Value& b);

// Unary operators.
Value negate(const Value& v);
Value complement(const Value& v);  // NOT: BOOL negation or bitstring complement

// Explicit X_TO_Y conversion semantics (the translate family).
Value convert(const Value& v, const Type& target);
bool convert_supported(TypeKind from, TypeKind to);

// Implicit assignment adaptation of a scalar value to a target type:
// identical type, integer widening within a signedness, integer literals
// into any integer kind (wrapped), INT-family into floats, and the string
// capacity truncation rule. Everything else is a TypeError.
Value limit_assign(const Value& v, const TypePtr& target);

// True when limit_assign would accept a value of type `from` where `to` is
// expected (used for strict call-parameter checks).
bool assignable(const Type& from, const Type& to, bool from_literal);

}  // namespace stref
