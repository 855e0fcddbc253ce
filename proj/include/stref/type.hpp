// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "stref/ast.hpp"

namespace stref {

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct ArrayRange {
  int64_t lo = 0, hi = 0;
  int64_t extent() const { return hi - lo + 1; }
};

// Resolved runtime type. Elementary kinds are shared singletons.
struct Type {
  TypeKind kind = TypeKind::Int;
  int64_t capacity = 0;             // String/WString max length
  std::string name;                 // Enum/Struct/FunctionBlock user-type name
  std::vector<ArrayRange> ranges;   // Array
  TypePtr element;                  // Array

  static TypePtr elementary(TypeKind k);
  static TypePtr string(int64_t capacity, bool wide);
  static TypePtr array(std::vector<ArrayRange> ranges, TypePtr element);
  static TypePtr enumeration(std::string name);
  static TypePtr structure(std::string name);
  static TypePtr callable(TypeKind k, std::string name);
};

constexpr int64_t kDefaultStringCapacity = 80;

bool same_type(const Type& a, const Type& b);
std::string type_name(const Type& t);  // snapshot TYPE column spelling

bool is_signed_int(TypeKind k);
bool is_unsigned_int(TypeKind k);
bool is_integer(TypeKind k);     // signed or unsigned, not bitstrings
bool is_bitstring(TypeKind k);
bool is_float(TypeKind k);
bool is_numeric(TypeKind k);     // integer, bitstring or float
bool is_time_kind(TypeKind k);   // Time/Date/Tod/Dt
bool is_string_kind(TypeKind k);
bool is_callable(TypeKind k);
bool is_elementary(TypeKind k);
int width_bits(TypeKind k);      // integers and bitstrings

// The keyword spelling of an elementary kind (INT, TIME_OF_DAY, ...).
const char* kind_keyword(TypeKind k);

// Registered user types.
struct EnumInfo {
  std::string name;
  std::vector<std::string> members;        // declaration order
  std::map<std::string, int64_t> ordinal;  // member -> value
  std::string default_member;              // first member unless declared
};

struct StructField {
  std::string name;
  const TypeExpr* declared = nullptr;  // borrowed from the SourceUnit
  const Expr* init = nullptr;          // borrowed, may be null
  TypePtr resolved;                    // filled on first instantiation
};

struct StructInfo {
  std::string name;
  std::vector<StructField> fields;
};

struct TypeTable {
  std::map<std::string, EnumInfo> enums;
  std::map<std::string, StructInfo> structs;

  const EnumInfo* find_enum(const std::string& n) const {
    auto it = enums.find(n);
    return it == enums.end() ? nullptr : &it->second;
  }
  const StructInfo* find_struct(const std::string& n) const {
    auto it = structs.find(n);
    return it == structs.end() ? nullptr : &it->second;
  }
};

}  // namespace stref
