// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "stref/type.hpp"

namespace stref {

struct PouDecl;

// Store index. Locations are handed out by a monotone counter and never
// reused within one machine lifetime.
struct Location {
  uint64_t index = 0;
  bool operator==(const Location&) const = default;
};

struct EnumV {
  std::string member;
  int64_t ordinal = 0;
};

struct StructV {
  std::vector<std::pair<std::string, Location>> fields;  // declaration order
};

struct ArrayV {
  std::vector<Location> elems;  // row-major
};

// Callable descriptor: a FUNCTION, a FUNCTION_BLOCK type, a FUNCTION_BLOCK
// instance (carrying its saved environment once called), or a PROGRAM.
struct CallableV {
  enum class K { Function, FunctionBlockType, FunctionBlockInstance, Program } k;
  std::string pou_name;
  const PouDecl* decl = nullptr;
  std::vector<std::pair<std::string, Location>> saved_env;
};

// Tagged runtime value.
//
// Payload conventions:
//  * integers/bitstrings: int64_t holding the canonical value (sign-extended
//    for signed kinds, zero-extended bit pattern for unsigned/bitstrings);
//  * Real values are doubles that are exactly representable as float;
//  * Time = signed ms, Date = days since 1970-01-01, Tod = ms in
//    [0, 86_400_000), Dt = ms since 1970-01-01 00:00:00.000.
struct Value {
  TypePtr type;            // null = "no value" (FB/program call result)
  bool from_literal = false;
  std::variant<std::monostate, int64_t, double, bool, std::string, EnumV, StructV, ArrayV,
               CallableV>
      payload;

  bool is_void() const { return type == nullptr; }
  TypeKind kind() const { return type->kind; }

  int64_t i() const { return std::get<int64_t>(payload); }
  uint64_t u() const { return static_cast<uint64_t>(std::get<int64_t>(payload)); }
  double f() const { return std::get<double>(payload); }
  bool b() const { return std::get<bool>(payload); }
  const std::string& s() const { return std::get<std::string>(payload); }
};

Value make_void();
Value make_int(TypeKind k, int64_t canonical);
Value make_float(TypeKind k, double v);  // Real payloads are rounded to float
Value make_bool(bool v);
Value make_string(TypePtr type, std::string v);  // truncated to capacity
Value make_time(TypeKind k, int64_t payload);    // Time/Date/Tod/Dt

// Truncates a raw 64-bit pattern to the width of `k` and re-extends it to
// the canonical payload (the overflow policy).
int64_t wrap_to_kind(TypeKind k, int64_t raw);

// Range of an integer kind in the canonical domain; for Ulint hi is the bit
// pattern -1 and callers must compare unsigned.
void int_range(TypeKind k, int64_t& lo, int64_t& hi);
bool int_in_range(TypeKind k, int64_t canonical);

// Typed literal with a built-in prefix ("INT#5", "T#1h", "16#FF", ...).
// User enum literals (Color#Red) are resolved by the evaluator instead.
// Throws Error(LiteralError) on malformed payloads or out-of-range values.
Value parse_typed_literal(std::string_view text);

// Standardization of a clock reading: carry seconds -> minutes -> hours and
// reduce modulo 24 h. `second_ms` is the seconds component in milliseconds.
Value normalize_tod(int64_t hours, int64_t minutes, int64_t second_ms);

// Default for an instantiable scalar type (numerics, BOOL, strings, time
// kinds, ENUM). Compound defaults are built by the machine, which owns the
// store. Throws Error(DefaultError) for non-instantiable kinds.
Value default_scalar(const Type& t, const TypeTable& types);

// Scalar rendering per the snapshot wire grammar. Aggregates are rendered by
// Machine::render_value, which can chase element locations.
std::string render_scalar(const Value& v);

// Shortest round-trip decimal with a forced '.0' when integral.
std::string render_float(double v, bool single_precision);

}  // namespace stref
