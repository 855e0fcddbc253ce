// SPDX-License-Identifier: Apache-2.0
#include "stref/type.hpp"

namespace stref {

TypePtr Type::elementary(TypeKind k) {
  static std::map<TypeKind, TypePtr> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<Type>();
  t->kind = k;
  if (k == TypeKind::String || k == TypeKind::WString) t->capacity = kDefaultStringCapacity;
  cache[k] = t;
  return t;
}

TypePtr Type::string(int64_t capacity, bool wide) {
  auto t = std::make_shared<Type>();
  t->kind = wide ? TypeKind::WString : TypeKind::String;
  t->capacity = capacity;
  return t;
}

TypePtr Type::array(std::vector<ArrayRange> ranges, TypePtr element) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Array;
  t->ranges = std::move(ranges);
  t->element = std::move(element);
  return t;
}

TypePtr Type::enumeration(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Enum;
  t->name = std::move(name);
  return t;
}

TypePtr Type::structure(std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = TypeKind::Struct;
  t->name = std::move(name);
  return t;
}

TypePtr Type::callable(TypeKind k, std::string name) {
  auto t = std::make_shared<Type>();
  t->kind = k;
  t->name = std::move(name);
  return t;
}

bool same_type(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::String:
    case TypeKind::WString:
      return a.capacity == b.capacity;
    case TypeKind::Enum:
    case TypeKind::Struct:
    case TypeKind::Function:
    case TypeKind::FunctionBlock:
    case TypeKind::Program:
      return a.name == b.name;
    case TypeKind::Array: {
      if (a.ranges.size() != b.ranges.size()) return false;
      for (size_t i = 0; i < a.ranges.size(); ++i)
        if (a.ranges[i].lo != b.ranges[i].lo || a.ranges[i].hi != b.ranges[i].hi) return false;
      return same_type(*a.element, *b.element);
    }
    default:
      return true;
  }
}

std::string type_name(const Type& t) {
  switch (t.kind) {
    case TypeKind::String:
    case TypeKind::WString: {
      std::string base = t.kind == TypeKind::String ? "STRING" : "WSTRING";
      if (t.capacity != kDefaultStringCapacity)
        base += "[" + std::to_string(t.capacity) + "]";
      return base;
    }
    case TypeKind::Enum:
    case TypeKind::Struct:
    case TypeKind::Function:
    case TypeKind::FunctionBlock:
    case TypeKind::Program:
      return t.name;
    case TypeKind::Array: {
      std::string s = "ARRAY [";
      for (size_t i = 0; i < t.ranges.size(); ++i) {
        if (i) s += ", ";
        s += std::to_string(t.ranges[i].lo) + " .. " + std::to_string(t.ranges[i].hi);
      }
      return s + "] OF " + type_name(*t.element);
    }
    default:
      return kind_keyword(t.kind);
  }
}

bool is_signed_int(TypeKind k) {
  return k == TypeKind::Sint || k == TypeKind::Int || k == TypeKind::Dint || k == TypeKind::Lint;
}

bool is_unsigned_int(TypeKind k) {
  return k == TypeKind::Usint || k == TypeKind::Uint || k == TypeKind::Udint ||
         k == TypeKind::Ulint;
}

bool is_integer(TypeKind k) { return is_signed_int(k) || is_unsigned_int(k); }

bool is_bitstring(TypeKind k) {
  return k == TypeKind::Byte || k == TypeKind::Word || k == TypeKind::Dword;
}

bool is_float(TypeKind k) { return k == TypeKind::Real || k == TypeKind::Lreal; }

bool is_numeric(TypeKind k) { return is_integer(k) || is_bitstring(k) || is_float(k); }

bool is_time_kind(TypeKind k) {
  return k == TypeKind::Time || k == TypeKind::Date || k == TypeKind::Tod || k == TypeKind::Dt;
}

bool is_string_kind(TypeKind k) { return k == TypeKind::String || k == TypeKind::WString; }

bool is_callable(TypeKind k) {
  return k == TypeKind::Function || k == TypeKind::FunctionBlock || k == TypeKind::Program;
}

bool is_elementary(TypeKind k) {
  return is_numeric(k) || k == TypeKind::Bool || is_string_kind(k) || is_time_kind(k);
}

int width_bits(TypeKind k) {
  switch (k) {
    case TypeKind::Sint: case TypeKind::Usint: case TypeKind::Byte: return 8;
    case TypeKind::Int: case TypeKind::Uint: case TypeKind::Word: return 16;
    case TypeKind::Dint: case TypeKind::Udint: case TypeKind::Dword: return 32;
    case TypeKind::Lint: case TypeKind::Ulint: return 64;
    default: return 0;
  }
}

const char* kind_keyword(TypeKind k) {
  switch (k) {
    case TypeKind::Sint: return "SINT";
    case TypeKind::Int: return "INT";
    case TypeKind::Dint: return "DINT";
    case TypeKind::Lint: return "LINT";
    case TypeKind::Usint: return "USINT";
    case TypeKind::Uint: return "UINT";
    case TypeKind::Udint: return "UDINT";
    case TypeKind::Ulint: return "ULINT";
    case TypeKind::Real: return "REAL";
    case TypeKind::Lreal: return "LREAL";
    case TypeKind::Bool: return "BOOL";
    case TypeKind::Byte: return "BYTE";
    case TypeKind::Word: return "WORD";
    case TypeKind::Dword: return "DWORD";
    case TypeKind::String: return "STRING";
    case TypeKind::WString: return "WSTRING";
    case TypeKind::Time: return "TIME";
    case TypeKind::Date: return "DATE";
    case TypeKind::Tod: return "TIME_OF_DAY";
    case TypeKind::Dt: return "DATE_AND_TIME";
    case TypeKind::Enum: return "ENUM";
    case TypeKind::Struct: return "STRUCT";
    case TypeKind::Array: return "ARRAY";
    case TypeKind::Function: return "FUNCTION";
    case TypeKind::FunctionBlock: return "FUNCTION_BLOCK";
    case TypeKind::Program: return "PROGRAM";
  }
  return "?";
}

}  // namespace stref
