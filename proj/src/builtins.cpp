// SPDX-License-Identifier: Apache-2.0
#include "stref/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "stref/error.hpp"
#include "stref/ops.hpp"

namespace stref {

namespace {

using Args = std::vector<Value>;

[[noreturn]] void type_error(const std::string& msg) { throw Error(ErrKind::TypeError, msg); }

void need_arity(const std::string& name, const Args& a, size_t lo, size_t hi) {
  if (a.size() < lo || a.size() > hi)
    throw Error(ErrKind::ArityError,
                name + " expects " +
                    (lo == hi ? std::to_string(lo)
                              : std::to_string(lo) + ".." +
                                    (hi == SIZE_MAX ? "n" : std::to_string(hi))) +
                    " arguments, got " + std::to_string(a.size()));
}

bool int_like(const Value& v) {
  return !v.is_void() && (is_integer(v.kind()) || is_bitstring(v.kind()));
}

int64_t int_arg(const std::string& name, const Value& v) {
  if (!int_like(v)) type_error(name + " expects an integer argument");
  return v.i();
}

double float_of(const std::string& name, const Value& v) {
  if (v.is_void()) type_error(name + " expects a numeric argument");
  if (is_float(v.kind())) return v.f();
  if (int_like(v)) return static_cast<double>(is_unsigned_int(v.kind()) || is_bitstring(v.kind())
                                                  ? static_cast<double>(v.u())
                                                  : static_cast<double>(v.i()));
  type_error(name + " expects a numeric argument");
}

// Transcendentals compute in 64-bit and narrow to REAL when every input was
// REAL.
TypeKind float_result_kind(const Args& a) {
  for (const auto& v : a)
    if (v.is_void() || v.kind() != TypeKind::Real) return TypeKind::Lreal;
  return TypeKind::Real;
}

const std::string& string_arg(const std::string& name, const Value& v) {
  if (v.is_void() || !is_string_kind(v.kind())) type_error(name + " expects a string argument");
  return v.s();
}

TypePtr string_result_type(const Value& like, int64_t capacity) {
  bool wide = like.kind() == TypeKind::WString;
  return capacity == kDefaultStringCapacity ? Type::elementary(like.type->kind)
                                            : Type::string(capacity, wide);
}

// position argument for the 1-indexed string functions
int64_t position_arg(const std::string& name, const Value& v, int64_t lo, int64_t hi) {
  int64_t p = int_arg(name, v);
  if (p < lo || p > hi)
    throw Error(ErrKind::IndexOutOfRange,
                name + " position " + std::to_string(p) + " outside [" + std::to_string(lo) +
                    ", " + std::to_string(hi) + "]");
  return p;
}

int64_t length_arg(const std::string& name, const Value& v) {
  int64_t n = int_arg(name, v);
  if (n < 0) throw Error(ErrKind::DomainError, name + " length must be non-negative");
  return n;
}

void need_same_string_kind(const std::string& name, const Value& a, const Value& b) {
  string_arg(name, a);
  string_arg(name, b);
  if (a.kind() != b.kind()) type_error(name + " arguments must have the same string kind");
}

using Handler = std::function<Value(const Args&)>;

struct Registry {
  std::map<std::string, Handler> handlers;
  std::vector<std::string> names;
  size_t translate_count = 0;
};

Value fold_arith(const std::string& name, BinOp op, const Args& a) {
  need_arity(name, a, 2, SIZE_MAX);
  Value acc = a[0];
  for (size_t i = 1; i < a.size(); ++i) acc = arith(op, acc, a[i]);
  return acc;
}

Value chain_compare(const std::string& name, BinOp op, const Args& a) {
  need_arity(name, a, 2, SIZE_MAX);
  for (size_t i = 0; i + 1 < a.size(); ++i)
    if (!compare(op, a[i], a[i + 1]).b()) return make_bool(false);
  return make_bool(true);
}

Value transcendental(const std::string& name, const Args& a, double (*fn)(double),
                     bool (*domain_ok)(double), const char* domain_msg) {
  need_arity(name, a, 1, 1);
  double x = float_of(name, a[0]);
  if (!domain_ok(x)) throw Error(ErrKind::DomainError, name + ": " + domain_msg);
  return make_float(float_result_kind(a), fn(x));
}

void register_numeric(Registry& r) {
  auto def = [&](const std::string& name, Handler h) {
    r.handlers.emplace(name, std::move(h));
  };

  def("ADD", [](const Args& a) { return fold_arith("ADD", BinOp::Add, a); });
  def("MUL", [](const Args& a) { return fold_arith("MUL", BinOp::Mul, a); });
  def("SUB", [](const Args& a) {
    need_arity("SUB", a, 2, 2);
    return arith(BinOp::Sub, a[0], a[1]);
  });
  def("DIV", [](const Args& a) {
    need_arity("DIV", a, 2, 2);
    return arith(BinOp::Div, a[0], a[1]);
  });
  def("MOD", [](const Args& a) {
    need_arity("MOD", a, 2, 2);
    return arith(BinOp::Mod, a[0], a[1]);
  });
  def("EXPT", [](const Args& a) {
    need_arity("EXPT", a, 2, 2);
    return arith(BinOp::Pow, a[0], a[1]);
  });
  def("SQR", [](const Args& a) {
    need_arity("SQR", a, 1, 1);
    return arith(BinOp::Mul, a[0], a[0]);
  });
  def("NEG", [](const Args& a) {
    need_arity("NEG", a, 1, 1);
    return negate(a[0]);
  });
  def("ABS", [](const Args& a) {
    need_arity("ABS", a, 1, 1);
    const Value& v = a[0];
    if (int_like(v)) {
      if (is_unsigned_int(v.kind()) || is_bitstring(v.kind())) return v;
      return v.i() < 0 ? negate(v) : v;
    }
    if (!v.is_void() && is_float(v.kind())) return make_float(v.kind(), std::fabs(v.f()));
    type_error("ABS expects a numeric argument");
  });
  def("INC", [](const Args& a) {
    need_arity("INC", a, 1, 1);
    Value one = make_int(TypeKind::Lint, 1);
    one.from_literal = true;
    if (!int_like(a[0])) type_error("INC expects an integer argument");
    return arith(BinOp::Add, a[0], one);
  });
  def("DEC", [](const Args& a) {
    need_arity("DEC", a, 1, 1);
    Value one = make_int(TypeKind::Lint, 1);
    one.from_literal = true;
    if (!int_like(a[0])) type_error("DEC expects an integer argument");
    return arith(BinOp::Sub, a[0], one);
  });
  def("MAX", [](const Args& a) {
    need_arity("MAX", a, 2, SIZE_MAX);
    Value best = a[0];
    for (size_t i = 1; i < a.size(); ++i)
      if (compare(BinOp::Gt, a[i], best).b()) best = a[i];
    return best;
  });
  def("MIN", [](const Args& a) {
    need_arity("MIN", a, 2, SIZE_MAX);
    Value best = a[0];
    for (size_t i = 1; i < a.size(); ++i)
      if (compare(BinOp::Lt, a[i], best).b()) best = a[i];
    return best;
  });
  def("MUX", [](const Args& a) {
    need_arity("MUX", a, 2, SIZE_MAX);
    int64_t k = int_arg("MUX", a[0]);
    if (k < 0 || static_cast<size_t>(k) >= a.size() - 1)
      throw Error(ErrKind::DomainError, "MUX selector " + std::to_string(k) + " out of range");
    return a[static_cast<size_t>(k) + 1];
  });
  def("LIMIT", [](const Args& a) {
    need_arity("LIMIT", a, 3, 3);
    const Value &mn = a[0], &in = a[1], &mx = a[2];
    if (compare(BinOp::Lt, in, mn).b()) return mn;
    if (compare(BinOp::Gt, in, mx).b() ) return mx;
    return in;
  });
  def("TRUNC", [](const Args& a) {
    need_arity("TRUNC", a, 1, 1);
    double x = float_of("TRUNC", a[0]);
    return make_float(float_result_kind(a), std::trunc(x));
  });
  def("FRAC", [](const Args& a) {
    need_arity("FRAC", a, 1, 1);
    double x = float_of("FRAC", a[0]);
    return make_float(float_result_kind(a), x - std::trunc(x));
  });
  def("FLOOR", [](const Args& a) {
    need_arity("FLOOR", a, 1, 1);
    double x = float_of("FLOOR", a[0]);
    return make_float(float_result_kind(a), std::floor(x));
  });
  def("SQRT", [](const Args& a) {
    return transcendental("SQRT", a, [](double x) { return std::sqrt(x); },
                          [](double x) { return x >= 0; }, "argument must be non-negative");
  });
  def("LN", [](const Args& a) {
    return transcendental("LN", a, [](double x) { return std::log(x); },
                          [](double x) { return x > 0; }, "argument must be positive");
  });
  def("LOG", [](const Args& a) {
    return transcendental("LOG", a, [](double x) { return std::log10(x); },
                          [](double x) { return x > 0; }, "argument must be positive");
  });
  def("EXP", [](const Args& a) {
    return transcendental("EXP", a, [](double x) { return std::exp(x); },
                          [](double) { return true; }, "");
  });
  def("SIN", [](const Args& a) {
    return transcendental("SIN", a, [](double x) { return std::sin(x); },
                          [](double) { return true; }, "");
  });
  def("COS", [](const Args& a) {
    return transcendental("COS", a, [](double x) { return std::cos(x); },
                          [](double) { return true; }, "");
  });
  def("TAN", [](const Args& a) {
    return transcendental("TAN", a, [](double x) { return std::tan(x); },
                          [](double) { return true; }, "");
  });
  def("ASIN", [](const Args& a) {
    return transcendental("ASIN", a, [](double x) { return std::asin(x); },
                          [](double x) { return x >= -1 && x <= 1; },
                          "argument must be in [-1, 1]");
  });
  def("ACOS", [](const Args& a) {
    return transcendental("ACOS", a, [](double x) { return std::acos(x); },
                          [](double x) { return x >= -1 && x <= 1; },
                          "argument must be in [-1, 1]");
  });
  def("ATAN", [](const Args& a) {
    return transcendental("ATAN", a, [](double x) { return std::atan(x); },
                          [](double) { return true; }, "");
  });
}

void register_logical(Registry& r) {
  auto def = [&](const std::string& name, Handler h) {
    r.handlers.emplace(name, std::move(h));
  };
  def("GT", [](const Args& a) { return chain_compare("GT", BinOp::Gt, a); });
  def("LT", [](const Args& a) { return chain_compare("LT", BinOp::Lt, a); });
  def("GE", [](const Args& a) { return chain_compare("GE", BinOp::Ge, a); });
  def("LE", [](const Args& a) { return chain_compare("LE", BinOp::Le, a); });
  def("EQ", [](const Args& a) { return chain_compare("EQ", BinOp::Eq, a); });
  def("NE", [](const Args& a) { return chain_compare("NE", BinOp::Ne, a); });
  def("AND", [](const Args& a) {
    need_arity("AND", a, 2, SIZE_MAX);
    Value acc = a[0];
    for (size_t i = 1; i < a.size(); ++i) acc = logic(BinOp::And, acc, a[i]);
    return acc;
  });
  def("OR", [](const Args& a) {
    need_arity("OR", a, 2, SIZE_MAX);
    Value acc = a[0];
    for (size_t i = 1; i < a.size(); ++i) acc = logic(BinOp::Or, acc, a[i]);
    return acc;
  });
  def("SEL", [](const Args& a) {
    need_arity("SEL", a, 3, 3);
    if (a[0].is_void() || a[0].kind() != TypeKind::Bool)
      type_error("SEL selector must be BOOL");
    return a[0].b() ? a[2] : a[1];
  });
}

void register_string(Registry& r) {
  auto def = [&](const std::string& name, Handler h) {
    r.handlers.emplace(name, std::move(h));
  };
  def("LEN", [](const Args& a) {
    need_arity("LEN", a, 1, 1);
    return make_int(TypeKind::Int, static_cast<int64_t>(string_arg("LEN", a[0]).size()));
  });
  def("CONCAT", [](const Args& a) {
    need_arity("CONCAT", a, 2, SIZE_MAX);
    std::string out = string_arg("CONCAT", a[0]);
    int64_t cap = a[0].type->capacity;
    for (size_t i = 1; i < a.size(); ++i) {
      need_same_string_kind("CONCAT", a[0], a[i]);
      out += a[i].s();
      cap = std::max(cap, a[i].type->capacity);
    }
    return make_string(string_result_type(a[0], cap), std::move(out));
  });
  def("LEFT", [](const Args& a) {
    need_arity("LEFT", a, 2, 2);
    const std::string& s = string_arg("LEFT", a[0]);
    size_t n = static_cast<size_t>(length_arg("LEFT", a[1]));
    return make_string(string_result_type(a[0], a[0].type->capacity),
                       s.substr(0, std::min(n, s.size())));
  });
  def("RIGHT", [](const Args& a) {
    need_arity("RIGHT", a, 2, 2);
    const std::string& s = string_arg("RIGHT", a[0]);
    size_t n = std::min(static_cast<size_t>(length_arg("RIGHT", a[1])), s.size());
    return make_string(string_result_type(a[0], a[0].type->capacity),
                       s.substr(s.size() - n));
  });
  def("MID", [](const Args& a) {
    need_arity("MID", a, 3, 3);
    const std::string& s = string_arg("MID", a[0]);
    size_t n = static_cast<size_t>(length_arg("MID", a[1]));
    size_t p = static_cast<size_t>(
        position_arg("MID", a[2], 1, static_cast<int64_t>(s.size()) + 1));
    return make_string(string_result_type(a[0], a[0].type->capacity),
                       s.substr(p - 1, std::min(n, s.size() - (p - 1))));
  });
  def("INSERT", [](const Args& a) {
    need_arity("INSERT", a, 3, 3);
    need_same_string_kind("INSERT", a[0], a[1]);
    std::string s = a[0].s();
    size_t p = static_cast<size_t>(
        position_arg("INSERT", a[2], 0, static_cast<int64_t>(s.size())));
    s.insert(p, a[1].s());
    return make_string(
        string_result_type(a[0], std::max(a[0].type->capacity, a[1].type->capacity)),
        std::move(s));
  });
  def("DELETE", [](const Args& a) {
    need_arity("DELETE", a, 3, 3);
    std::string s = string_arg("DELETE", a[0]);
    size_t n = static_cast<size_t>(length_arg("DELETE", a[1]));
    size_t p = static_cast<size_t>(
        position_arg("DELETE", a[2], 1, static_cast<int64_t>(s.size()) + 1));
    s.erase(p - 1, std::min(n, s.size() - (p - 1)));
    return make_string(string_result_type(a[0], a[0].type->capacity), std::move(s));
  });
  def("REPLACE", [](const Args& a) {
    need_arity("REPLACE", a, 4, 4);
    need_same_string_kind("REPLACE", a[0], a[1]);
    std::string s = a[0].s();
    size_t n = static_cast<size_t>(length_arg("REPLACE", a[2]));
    size_t p = static_cast<size_t>(
        position_arg("REPLACE", a[3], 1, static_cast<int64_t>(s.size()) + 1));
    s.erase(p - 1, std::min(n, s.size() - (p - 1)));
    s.insert(p - 1, a[1].s());
    return make_string(
        string_result_type(a[0], std::max(a[0].type->capacity, a[1].type->capacity)),
        std::move(s));
  });
  def("FIND", [](const Args& a) {
    need_arity("FIND", a, 2, 2);
    need_same_string_kind("FIND", a[0], a[1]);
    size_t pos = a[0].s().find(a[1].s());
    return make_int(TypeKind::Int,
                    pos == std::string::npos ? 0 : static_cast<int64_t>(pos) + 1);
  });
}

// All spellings of a kind usable inside a translate function name.
std::vector<std::string> kind_spellings(TypeKind k) {
  switch (k) {
    case TypeKind::Tod: return {"TOD", "TIME_OF_DAY"};
    case TypeKind::Dt: return {"DT", "DATE_AND_TIME"};
    default: return {kind_keyword(k)};
  }
}

void register_translate(Registry& r) {
  static constexpr TypeKind kinds[] = {
      TypeKind::Sint, TypeKind::Int,   TypeKind::Dint,  TypeKind::Lint,
      TypeKind::Usint, TypeKind::Uint, TypeKind::Udint, TypeKind::Ulint,
      TypeKind::Real, TypeKind::Lreal, TypeKind::Bool,  TypeKind::Byte,
      TypeKind::Word, TypeKind::Dword, TypeKind::String, TypeKind::WString,
      TypeKind::Time, TypeKind::Date,  TypeKind::Tod,   TypeKind::Dt,
  };
  for (TypeKind from : kinds) {
    for (TypeKind to : kinds) {
      if (!convert_supported(from, to)) continue;
      for (const auto& fs : kind_spellings(from)) {
        for (const auto& ts : kind_spellings(to)) {
          std::string name = fs + "_TO_" + ts;
          TypeKind f = from, t = to;
          r.handlers.emplace(name, [name, f, t](const Args& a) {
            need_arity(name, a, 1, 1);
            Value v = a[0];
            if (v.is_void()) type_error(name + " expects a value");
            if (v.kind() != f) {
              TypePtr ft = Type::elementary(f);
              if (!assignable(*v.type, *ft, v.from_literal))
                type_error(name + " expects a " + kind_keyword(f) + " argument");
              v = limit_assign(v, ft);
            }
            return convert(v, *Type::elementary(t));
          });
          ++r.translate_count;
        }
      }
    }
  }
}

const Registry& registry() {
  static const Registry r = [] {
    Registry reg;
    register_numeric(reg);
    register_logical(reg);
    register_string(reg);
    register_translate(reg);
    for (const auto& [name, h] : reg.handlers) reg.names.push_back(name);
    std::sort(reg.names.begin(), reg.names.end());
    return reg;
  }();
  return r;
}

}  // namespace

bool is_builtin(const std::string& name) { return registry().handlers.count(name) > 0; }

Value dispatch_builtin(const std::string& name, const std::vector<Value>& args) {
  auto it = registry().handlers.find(name);
  if (it == registry().handlers.end())
    throw Error(ErrKind::UnknownPOU, "no built-in named '" + name + "'");
  return it->second(args);
}

const std::vector<std::string>& builtin_names() { return registry().names; }

size_t translate_function_count() { return registry().translate_count; }

}  // namespace stref
