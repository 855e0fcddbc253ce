// SPDX-License-Identifier: Apache-2.0
#include "stref/ops.hpp"

#include <cmath>
#include <cstdlib>

#include "stref/error.hpp"
#include "stref/timecodec.hpp"

namespace stref {

namespace {

[[noreturn]] void type_error(const std::string& msg) { throw Error(ErrKind::TypeError, msg); }

bool int_like(TypeKind k) { return is_integer(k) || is_bitstring(k); }
bool unsigned_like(TypeKind k) { return is_unsigned_int(k) || is_bitstring(k); }

__int128 math_value(const Value& v) {
  if (unsigned_like(v.kind())) return static_cast<__int128>(v.u());
  return static_cast<__int128>(v.i());
}

int64_t wrap128(TypeKind k, __int128 x) {
  return wrap_to_kind(k, static_cast<int64_t>(static_cast<unsigned __int128>(x)));
}

TypeKind unsigned_of_width(int bits) {
  switch (bits) {
    case 8: return TypeKind::Usint;
    case 16: return TypeKind::Uint;
    case 32: return TypeKind::Udint;
    default: return TypeKind::Ulint;
  }
}

TypeKind signed_of_width(int bits) {
  switch (bits) {
    case 8: return TypeKind::Sint;
    case 16: return TypeKind::Int;
    case 32: return TypeKind::Dint;
    default: return TypeKind::Lint;
  }
}

// Integer promotion: the wider operand's type wins; equal-width mixes of one
// signedness keep the numeric kind over the bitstring kind; equal-width
// signed/unsigned mixes promote to the signed type of double width and fail
// at 64 bits.
TypeKind promote_int(TypeKind a, TypeKind b) {
  if (a == b) return a;
  int wa = width_bits(a), wb = width_bits(b);
  bool ua = unsigned_like(a), ub = unsigned_like(b);
  if (ua == ub) {
    if (wa != wb) return wa > wb ? a : b;
    // same width, same signedness class: prefer the numeric kind
    if (is_bitstring(a) && !is_bitstring(b)) return b;
    if (is_bitstring(b) && !is_bitstring(a)) return a;
    return a;
  }
  // signed/unsigned mix: the wider operand's type wins outright; equal
  // widths promote to the signed type of double width, failing at 64 bits
  if (wa != wb) return wa > wb ? a : b;
  if (wa * 2 > 64)
    type_error("no common type for " + std::string(kind_keyword(a)) + " and " +
               kind_keyword(b));
  return signed_of_width(wa * 2);
}

// An untyped literal adapts to the other operand's kind.
void adapt_literals(Value& a, Value& b) {
  if (a.from_literal == b.from_literal) return;
  Value& lit = a.from_literal ? a : b;
  const Value& other = a.from_literal ? b : a;
  if (int_like(lit.kind()) && int_like(other.kind())) {
    int64_t canon = wrap_to_kind(other.kind(), lit.i());
    lit = make_int(other.kind(), canon);
    lit.from_literal = true;
  } else if (is_float(lit.kind()) && is_float(other.kind())) {
    lit = make_float(other.kind(), lit.f());
    lit.from_literal = true;
  }
}

uint64_t pow_wrapped(uint64_t base, uint64_t exp) {
  uint64_t result = 1;
  while (exp != 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

Value float_arith(BinOp op, TypeKind k, double x, double y) {
  bool single = k == TypeKind::Real;
  switch (op) {
    case BinOp::Add: return make_float(k, single ? double(float(x) + float(y)) : x + y);
    case BinOp::Sub: return make_float(k, single ? double(float(x) - float(y)) : x - y);
    case BinOp::Mul: return make_float(k, single ? double(float(x) * float(y)) : x * y);
    case BinOp::Div:
      if (y == 0.0) throw Error(ErrKind::DivisionByZero, "division by zero");
      return make_float(k, single ? double(float(x) / float(y)) : x / y);
    case BinOp::Pow:
      return make_float(k, single ? double(powf(float(x), float(y))) : std::pow(x, y));
    case BinOp::Mod:
      type_error("MOD requires integer operands");
    default:
      type_error("not an arithmetic operator");
  }
}

Value time_arith(BinOp op, const Value& a, const Value& b) {
  TypeKind ka = a.kind(), kb = b.kind();
  bool add = op == BinOp::Add, sub = op == BinOp::Sub;
  if (!add && !sub) type_error("unsupported operation on time values");
  if (ka == TypeKind::Time && kb == TypeKind::Time)
    return make_time(TypeKind::Time, add ? a.i() + b.i() : a.i() - b.i());
  if (ka == TypeKind::Tod && kb == TypeKind::Time)
    return make_time(TypeKind::Tod, wrap_tod(add ? a.i() + b.i() : a.i() - b.i()));
  if (ka == TypeKind::Dt && kb == TypeKind::Time)
    return make_time(TypeKind::Dt, add ? a.i() + b.i() : a.i() - b.i());
  if (ka == TypeKind::Date && kb == TypeKind::Date && sub)
    return make_time(TypeKind::Time, (a.i() - b.i()) * kMsPerDay);
  type_error(std::string("unsupported time combination ") + kind_keyword(ka) + " " +
             to_string(op) + " " + kind_keyword(kb));
}

}  // namespace

Value arith(BinOp op, const Value& a_in, const Value& b_in) {
  if (a_in.is_void() || b_in.is_void()) type_error("operand has no value");
  if (is_time_kind(a_in.kind()) || is_time_kind(b_in.kind()))
    return time_arith(op, a_in, b_in);

  Value a = a_in, b = b_in;
  adapt_literals(a, b);
  TypeKind ka = a.kind(), kb = b.kind();
  if (!is_numeric(ka) || !is_numeric(kb))
    type_error(std::string("arithmetic needs numeric operands, got ") + kind_keyword(ka) +
               " and " + kind_keyword(kb));

  if (is_float(ka) || is_float(kb)) {
    TypeKind rk = (ka == TypeKind::Lreal || kb == TypeKind::Lreal) ? TypeKind::Lreal
                                                                   : TypeKind::Real;
    double x = is_float(ka) ? a.f() : static_cast<double>(math_value(a));
    double y = is_float(kb) ? b.f() : static_cast<double>(math_value(b));
    return float_arith(op, rk, x, y);
  }

  TypeKind rk = promote_int(ka, kb);
  __int128 x = math_value(a), y = math_value(b);
  switch (op) {
    case BinOp::Add: return make_int(rk, wrap128(rk, x + y));
    case BinOp::Sub: return make_int(rk, wrap128(rk, x - y));
    case BinOp::Mul: {
      // products of two 64-bit operands can exceed the signed 128-bit range;
      // the result type keeps at most 64 bits, so multiply modulo 2^128
      unsigned __int128 prod = static_cast<unsigned __int128>(static_cast<unsigned __int128>(x))
                               * static_cast<unsigned __int128>(y);
      return make_int(rk, wrap_to_kind(rk, static_cast<int64_t>(
                              static_cast<uint64_t>(prod))));
    }
    case BinOp::Div:
      if (y == 0) throw Error(ErrKind::DivisionByZero, "division by zero");
      return make_int(rk, wrap128(rk, x / y));
    case BinOp::Mod:
      if (y == 0) throw Error(ErrKind::DivisionByZero, "MOD by zero");
      return make_int(rk, wrap128(rk, x % y));
    case BinOp::Pow: {
      if (y < 0)
        throw Error(ErrKind::DomainError, "integer '**' requires a non-negative exponent");
      uint64_t base = static_cast<uint64_t>(static_cast<unsigned __int128>(x));
      uint64_t r = pow_wrapped(base, static_cast<uint64_t>(y));
      return make_int(rk, wrap_to_kind(rk, static_cast<int64_t>(r)));
    }
    default:
      type_error("not an arithmetic operator");
  }
}

Value compare(BinOp op, const Value& a_in, const Value& b_in) {
  if (!is_compare(op)) type_error("not a comparison operator");
  if (a_in.is_void() || b_in.is_void()) type_error("operand has no value");
  Value a = a_in, b = b_in;
  adapt_literals(a, b);
  TypeKind ka = a.kind(), kb = b.kind();

  int cmp;  // -1 / 0 / 1
  bool unordered = false;
  if (is_numeric(ka) && is_numeric(kb)) {
    if (int_like(ka) && int_like(kb)) {
      __int128 x = math_value(a), y = math_value(b);
      cmp = x < y ? -1 : x > y ? 1 : 0;
    } else {
      double x = is_float(ka) ? a.f() : static_cast<double>(math_value(a));
      double y = is_float(kb) ? b.f() : static_cast<double>(math_value(b));
      if (std::isnan(x) || std::isnan(y)) {
        unordered = true;
        cmp = 2;
      } else {
        cmp = x < y ? -1 : x > y ? 1 : 0;
      }
    }
  } else if (is_string_kind(ka) && ka == kb) {
    cmp = a.s() < b.s() ? -1 : a.s() > b.s() ? 1 : 0;
  } else if (ka == TypeKind::Bool && kb == TypeKind::Bool) {
    if (op != BinOp::Eq && op != BinOp::Ne) type_error("BOOL supports only = and <>");
    cmp = a.b() == b.b() ? 0 : 1;
  } else if (is_time_kind(ka) && ka == kb) {
    cmp = a.i() < b.i() ? -1 : a.i() > b.i() ? 1 : 0;
  } else if (ka == TypeKind::Enum && kb == TypeKind::Enum && a.type->name == b.type->name) {
    auto& ea = std::get<EnumV>(a.payload);
    auto& eb = std::get<EnumV>(b.payload);
    cmp = ea.ordinal < eb.ordinal ? -1 : ea.ordinal > eb.ordinal ? 1 : 0;
  } else {
    type_error(std::string("cannot compare ") + kind_keyword(ka) + " with " +
               kind_keyword(kb));
  }

  bool r;
  if (unordered) {
    r = op == BinOp::Ne;  // IEEE: NaN compares unequal to everything
  } else {
    switch (op) {
      case BinOp::Lt: r = cmp < 0; break;
      case BinOp::Gt: r = cmp > 0; break;
      case BinOp::Eq: r = cmp == 0; break;
      case BinOp::Le: r = cmp <= 0; break;
      case BinOp::Ge: r = cmp >= 0; break;
      default: r = cmp != 0; break;
    }
  }
  return make_bool(r);
}

Value logic(BinOp op, const Value& a, const Value& b) {
  if (!is_logic(op)) type_error("not a logical operator");
  if (a.is_void() || b.is_void()) type_error("operand has no value");
  TypeKind ka = a.kind(), kb = b.kind();
  if (ka == TypeKind::Bool && kb == TypeKind::Bool) {
    switch (op) {
      case BinOp::And: case BinOp::AndThen: return make_bool(a.b() && b.b());
      case BinOp::Or: case BinOp::OrElse: return make_bool(a.b() || b.b());
      default: return make_bool(a.b() != b.b());
    }
  }
  if (is_bitstring(ka) && ka == kb) {
    if (op == BinOp::AndThen || op == BinOp::OrElse)
      type_error("AND_THEN/OR_ELSE require BOOL operands");
    uint64_t x = a.u(), y = b.u();
    uint64_t r = op == BinOp::And ? (x & y) : op == BinOp::Or ? (x | y) : (x ^ y);
    return make_int(ka, wrap_to_kind(ka, static_cast<int64_t>(r)));
  }
  type_error(std::string("logical operator needs BOOL or same-width bitstrings, got ") +
             kind_keyword(ka) + " and " + kind_keyword(kb));
}

Value negate(const Value& v) {
  if (v.is_void()) type_error("operand has no value");
  TypeKind k = v.kind();
  if (int_like(k)) {
    Value r = make_int(k, wrap128(k, -math_value(v)));
    r.from_literal = v.from_literal;
    return r;
  }
  if (is_float(k)) {
    Value r = make_float(k, -v.f());
    r.from_literal = v.from_literal;
    return r;
  }
  if (k == TypeKind::Time) return make_time(k, -v.i());
  type_error(std::string("cannot negate ") + kind_keyword(k));
}

Value complement(const Value& v) {
  if (v.is_void()) type_error("operand has no value");
  if (v.kind() == TypeKind::Bool) return make_bool(!v.b());
  if (is_bitstring(v.kind()))
    return make_int(v.kind(), wrap_to_kind(v.kind(), ~v.i()));
  type_error("NOT requires BOOL or a bitstring");
}

// ---------------------------------------------------------------------------
// Conversion (translate family)
// ---------------------------------------------------------------------------

bool convert_supported(TypeKind from, TypeKind to) {
  if (from == to) return false;
  bool fn = is_numeric(from), tn = is_numeric(to);
  if (fn && tn) return true;
  if (from == TypeKind::Bool && (is_integer(to) || is_bitstring(to))) return true;
  if ((is_integer(from) || is_bitstring(from)) && to == TypeKind::Bool) return true;
  if (fn && is_string_kind(to)) return true;
  if (is_string_kind(from) && tn) return true;
  if (is_string_kind(from) && is_string_kind(to)) return true;
  if (is_time_kind(from) && is_integer(to)) return true;
  if (is_integer(from) && is_time_kind(to)) return true;
  return false;
}

namespace {

// Round half to even, then wrap; values beyond 64 bits reduce modulo 2^64.
int64_t float_to_int_bits(double x) {
  if (std::isnan(x)) throw Error(ErrKind::ConvertError, "cannot convert NaN to an integer");
  double r = std::nearbyint(x);
  if (r >= -9.223372036854775808e18 && r < 9.223372036854775808e18)
    return static_cast<int64_t>(r);
  double m = std::fmod(r, 18446744073709551616.0);
  if (m < 0) m += 18446744073709551616.0;
  return static_cast<int64_t>(static_cast<uint64_t>(m));
}

int64_t parse_string_int(const std::string& s) {
  if (s.empty()) throw Error(ErrKind::ConvertError, "empty string");
  size_t i = s[0] == '+' || s[0] == '-' ? 1 : 0;
  if (i >= s.size()) throw Error(ErrKind::ConvertError, "bad integer text '" + s + "'");
  unsigned __int128 v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw Error(ErrKind::ConvertError, "bad integer text '" + s + "'");
    v = v * 10 + static_cast<unsigned>(s[i] - '0');
    v &= (static_cast<unsigned __int128>(1) << 127) - 1;  // keep bounded
  }
  int64_t bits = static_cast<int64_t>(static_cast<uint64_t>(v));
  return s[0] == '-' ? -bits : bits;
}

}  // namespace

Value convert(const Value& v, const Type& target) {
  TypeKind from = v.kind(), to = target.kind;
  if (from == to && !is_string_kind(to)) return v;
  if (!convert_supported(from, to) && from != to)
    type_error(std::string("no conversion from ") + kind_keyword(from) + " to " +
               kind_keyword(to));

  auto string_result = [&](std::string text) {
    TypePtr t = target.capacity == kDefaultStringCapacity
                    ? Type::elementary(to)
                    : Type::string(target.capacity, to == TypeKind::WString);
    return make_string(std::move(t), std::move(text));
  };

  // source categories
  if (int_like(from)) {
    if (int_like(to)) return make_int(to, wrap_to_kind(to, v.i()));
    if (is_float(to)) return make_float(to, static_cast<double>(math_value(v)));
    if (to == TypeKind::Bool) return make_bool(v.i() != 0);
    if (is_string_kind(to))
      return string_result(unsigned_like(from) ? std::to_string(v.u())
                                               : std::to_string(v.i()));
    if (is_time_kind(to)) return make_time(to, v.i());
  }
  if (is_float(from)) {
    if (is_float(to)) return make_float(to, v.f());
    if (int_like(to)) return make_int(to, wrap_to_kind(to, float_to_int_bits(v.f())));
    if (is_string_kind(to)) return string_result(render_float(v.f(), from == TypeKind::Real));
  }
  if (from == TypeKind::Bool && int_like(to)) return make_int(to, v.b() ? 1 : 0);
  if (is_string_kind(from)) {
    if (is_string_kind(to)) return string_result(v.s());
    if (int_like(to)) return make_int(to, wrap_to_kind(to, parse_string_int(v.s())));
    if (is_float(to)) {
      char* end = nullptr;
      const std::string& s = v.s();
      double d = std::strtod(s.c_str(), &end);
      if (s.empty() || end != s.c_str() + s.size())
        throw Error(ErrKind::ConvertError, "bad float text '" + s + "'");
      return make_float(to, d);
    }
  }
  if (is_time_kind(from) && is_integer(to)) return make_int(to, wrap_to_kind(to, v.i()));
  if (is_integer(from) && is_time_kind(to)) return make_time(to, v.i());
  type_error(std::string("no conversion from ") + kind_keyword(from) + " to " +
             kind_keyword(to));
}

// ---------------------------------------------------------------------------
// Assignment adaptation
// ---------------------------------------------------------------------------

bool assignable(const Type& from, const Type& to, bool from_literal) {
  if (same_type(from, to)) return true;
  TypeKind f = from.kind, t = to.kind;
  if (is_string_kind(f) && f == t) return true;  // capacity change, truncates
  if (int_like(f) && int_like(t)) return true;   // wraps when narrowing
  if (from_literal && is_float(f) && is_float(t)) return true;
  if (is_integer(f) && is_float(t)) return true;
  return false;
}

Value limit_assign(const Value& v, const TypePtr& target) {
  if (v.is_void()) type_error("no value to assign");
  const Type& t = *target;
  TypeKind f = v.kind(), k = t.kind;

  if (same_type(*v.type, t)) {
    if (k == TypeKind::Array && t.ranges.size() > 1)
      type_error("whole-value assignment of multi-dimensional arrays is not supported");
    Value r = v;
    r.from_literal = false;
    r.type = target;
    return r;
  }
  if (is_string_kind(f) && f == k) {
    std::string payload = v.s();
    return make_string(target, std::move(payload));
  }
  // Integer-family stores truncate to the target width (the overflow
  // policy); widening within a signedness is the value-preserving case.
  if (int_like(f) && int_like(k)) return make_int(k, wrap_to_kind(k, v.i()));
  if (v.from_literal && is_float(f) && is_float(k)) return make_float(k, v.f());
  if (is_integer(f) && is_float(k))
    return make_float(k, static_cast<double>(math_value(v)));
  type_error(std::string("cannot assign ") + kind_keyword(f) + " to " + kind_keyword(k));
}

}  // namespace stref
