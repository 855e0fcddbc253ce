// SPDX-License-Identifier: Apache-2.0
#include "stref/value.hpp"

#include <cctype>
#include <charconv>

#include "stref/error.hpp"
#include "stref/timecodec.hpp"

namespace stref {

Value make_void() { return Value{}; }

Value make_int(TypeKind k, int64_t canonical) {
  Value v;
  v.type = Type::elementary(k);
  v.payload = wrap_to_kind(k, canonical);
  return v;
}

Value make_float(TypeKind k, double d) {
  Value v;
  v.type = Type::elementary(k);
  v.payload = k == TypeKind::Real ? static_cast<double>(static_cast<float>(d)) : d;
  return v;
}

Value make_bool(bool b) {
  Value v;
  v.type = Type::elementary(TypeKind::Bool);
  v.payload = b;
  return v;
}

Value make_string(TypePtr type, std::string s) {
  Value v;
  if (s.size() > static_cast<size_t>(type->capacity))
    s.resize(static_cast<size_t>(type->capacity));
  v.type = std::move(type);
  v.payload = std::move(s);
  return v;
}

Value make_time(TypeKind k, int64_t payload) {
  Value v;
  v.type = Type::elementary(k);
  v.payload = k == TypeKind::Tod ? wrap_tod(payload) : payload;
  return v;
}

int64_t wrap_to_kind(TypeKind k, int64_t raw) {
  int bits = width_bits(k);
  if (bits == 0 || bits == 64) return raw;
  uint64_t mask = (uint64_t{1} << bits) - 1;
  uint64_t low = static_cast<uint64_t>(raw) & mask;
  if (is_signed_int(k) && (low >> (bits - 1)) != 0) low |= ~mask;  // sign extend
  return static_cast<int64_t>(low);
}

void int_range(TypeKind k, int64_t& lo, int64_t& hi) {
  int bits = width_bits(k);
  if (is_signed_int(k)) {
    hi = bits == 64 ? INT64_MAX : (int64_t{1} << (bits - 1)) - 1;
    lo = -hi - 1;
  } else {
    lo = 0;
    hi = bits == 64 ? -1 : static_cast<int64_t>((uint64_t{1} << bits) - 1);
  }
}

bool int_in_range(TypeKind k, int64_t canonical) {
  return wrap_to_kind(k, canonical) == canonical &&
         (is_signed_int(k) || canonical >= 0 || width_bits(k) == 64);
}

// ---------------------------------------------------------------------------
// Typed literals
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void bad_literal(const std::string& msg) {
  throw Error(ErrKind::LiteralError, msg);
}

// Digits of `payload` in base `radix`, underscores skipped; result is the
// raw bit pattern.
int64_t parse_radix(std::string_view payload, int radix) {
  if (payload.empty()) bad_literal("empty radix literal");
  uint64_t v = 0;
  bool any = false;
  for (char c : payload) {
    if (c == '_') continue;
    int d;
    if (c >= '0' && c <= '9') d = c - '0';
    else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') d = c - 'A' + 10;
    else bad_literal(std::string("bad digit '") + c + "'");
    if (d >= radix) bad_literal(std::string("digit '") + c + "' out of range for base");
    if (v > (UINT64_MAX - static_cast<uint64_t>(d)) / static_cast<uint64_t>(radix))
      bad_literal("radix literal exceeds 64 bits");
    v = v * static_cast<uint64_t>(radix) + static_cast<uint64_t>(d);
    any = true;
  }
  if (!any) bad_literal("empty radix literal");
  return static_cast<int64_t>(v);
}

int64_t parse_decimal_signed(std::string_view payload) {
  if (payload.empty()) bad_literal("empty integer payload");
  bool neg = false;
  size_t i = 0;
  if (payload[0] == '-') {
    neg = true;
    i = 1;
  } else if (payload[0] == '+') {
    i = 1;
  }
  if (i >= payload.size()) bad_literal("empty integer payload");
  unsigned __int128 v = 0;
  for (; i < payload.size(); ++i) {
    char c = payload[i];
    if (c == '_') continue;
    if (!std::isdigit(static_cast<unsigned char>(c))) bad_literal("bad integer payload");
    v = v * 10 + static_cast<unsigned>(c - '0');
    if (v > (static_cast<unsigned __int128>(1) << 70)) bad_literal("integer payload too large");
  }
  __int128 sv = neg ? -static_cast<__int128>(v) : static_cast<__int128>(v);
  if (sv > static_cast<__int128>(UINT64_MAX) || sv < -(static_cast<__int128>(1) << 63))
    bad_literal("integer payload out of range");
  return static_cast<int64_t>(sv);
}

struct Prefix {
  std::string_view text;
  TypeKind kind;
};

constexpr Prefix kTypedPrefixes[] = {
    {"SINT", TypeKind::Sint},   {"INT", TypeKind::Int},     {"DINT", TypeKind::Dint},
    {"LINT", TypeKind::Lint},   {"USINT", TypeKind::Usint}, {"UINT", TypeKind::Uint},
    {"UDINT", TypeKind::Udint}, {"ULINT", TypeKind::Ulint}, {"REAL", TypeKind::Real},
    {"LREAL", TypeKind::Lreal}, {"BOOL", TypeKind::Bool},   {"BYTE", TypeKind::Byte},
    {"WORD", TypeKind::Word},   {"DWORD", TypeKind::Dword},
    {"TIME_OF_DAY", TypeKind::Tod}, {"TOD", TypeKind::Tod},
    {"DATE_AND_TIME", TypeKind::Dt}, {"DT", TypeKind::Dt},
    {"TIME", TypeKind::Time},   {"T", TypeKind::Time},
    {"DATE", TypeKind::Date},   {"D", TypeKind::Date},
};

}  // namespace

Value parse_typed_literal(std::string_view text) {
  size_t hash = text.find('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 > text.size())
    bad_literal("malformed typed literal '" + std::string(text) + "'");
  std::string_view prefix = text.substr(0, hash);
  std::string_view payload = text.substr(hash + 1);
  if (payload.empty()) bad_literal("empty typed literal payload");

  if (prefix == "2" || prefix == "8" || prefix == "16") {
    int radix = prefix == "2" ? 2 : prefix == "8" ? 8 : 16;
    int64_t bits = parse_radix(payload, radix);
    // Untyped radix literal: a bit pattern in the narrowest bitstring that
    // holds it.
    TypeKind k = TypeKind::Byte;
    uint64_t uv = static_cast<uint64_t>(bits);
    if (uv > 0xFFFFFFFFull) k = TypeKind::Ulint;
    else if (uv > 0xFFFFull) k = TypeKind::Dword;
    else if (uv > 0xFFull) k = TypeKind::Word;
    Value v = make_int(k, bits);
    v.from_literal = true;
    return v;
  }

  for (const auto& p : kTypedPrefixes) {
    if (prefix != p.text) continue;
    TypeKind k = p.kind;
    switch (k) {
      case TypeKind::Time: return make_time(k, parse_duration_ms(payload));
      case TypeKind::Tod: return make_time(k, parse_tod_ms(payload));
      case TypeKind::Date: return make_time(k, parse_date_days(payload));
      case TypeKind::Dt: return make_time(k, parse_dt_ms(payload));
      case TypeKind::Bool: {
        if (payload == "TRUE" || payload == "1") return make_bool(true);
        if (payload == "FALSE" || payload == "0") return make_bool(false);
        bad_literal("bad BOOL payload '" + std::string(payload) + "'");
      }
      case TypeKind::Real:
      case TypeKind::Lreal: {
        std::string digits;
        for (char c : payload)
          if (c != '_') digits.push_back(c);
        char* end = nullptr;
        double d = std::strtod(digits.c_str(), &end);
        if (end != digits.c_str() + digits.size() || digits.empty())
          bad_literal("bad float payload '" + std::string(payload) + "'");
        return make_float(k, d);
      }
      default: {
        int64_t raw;
        if (payload.size() > 2 && (payload.substr(0, 2) == "2#" || payload.substr(0, 3) == "16#" ||
                                   payload.substr(0, 2) == "8#")) {
          size_t h2 = payload.find('#');
          int radix = payload.substr(0, h2) == "2" ? 2 : payload.substr(0, h2) == "8" ? 8 : 16;
          raw = parse_radix(payload.substr(h2 + 1), radix);
          if (is_bitstring(k) || is_unsigned_int(k)) {
            // bit pattern must fit the width
            if (width_bits(k) < 64 &&
                static_cast<uint64_t>(raw) >> width_bits(k) != 0)
              bad_literal("radix payload exceeds " + std::string(kind_keyword(k)));
          } else if (!int_in_range(k, raw)) {
            bad_literal("radix payload exceeds " + std::string(kind_keyword(k)));
          }
        } else {
          raw = parse_decimal_signed(payload);
          bool ok;
          if (k == TypeKind::Ulint) {
            // canonical domain is the bit pattern; accept any non-negative
            // 64-bit value, which parse_decimal_signed already guarantees
            ok = payload[0] != '-' || raw == 0;
          } else if (is_bitstring(k) || is_unsigned_int(k)) {
            ok = raw >= 0 && wrap_to_kind(k, raw) == raw;
          } else {
            ok = int_in_range(k, raw);
          }
          if (!ok)
            bad_literal("value " + std::string(payload) + " out of range for " +
                        kind_keyword(k));
        }
        return make_int(k, raw);
      }
    }
  }
  bad_literal("unknown typed literal prefix '" + std::string(prefix) + "'");
}

Value normalize_tod(int64_t hours, int64_t minutes, int64_t second_ms) {
  if (hours < 0 || minutes < 0 || second_ms < 0)
    throw Error(ErrKind::LiteralError, "negative time-of-day component");
  return make_time(TypeKind::Tod,
                   hours * kMsPerHour + minutes * kMsPerMinute + second_ms);
}

// ---------------------------------------------------------------------------
// Defaults
// ---------------------------------------------------------------------------

Value default_scalar(const Type& t, const TypeTable& types) {
  TypeKind k = t.kind;
  if (is_integer(k) || is_bitstring(k)) return make_int(k, 0);
  if (is_float(k)) return make_float(k, 0.0);
  if (k == TypeKind::Bool) return make_bool(false);
  if (is_string_kind(k)) {
    Value v;
    v.type = std::make_shared<Type>(t);
    v.payload = std::string();
    return v;
  }
  if (is_time_kind(k)) return make_time(k, 0);
  if (k == TypeKind::Enum) {
    const EnumInfo* info = types.find_enum(t.name);
    if (!info || info->members.empty())
      throw Error(ErrKind::DefaultError, "unknown enum type '" + t.name + "'");
    const std::string& member =
        info->default_member.empty() ? info->members.front() : info->default_member;
    Value v;
    v.type = Type::enumeration(t.name);
    v.payload = EnumV{member, info->ordinal.at(member)};
    return v;
  }
  throw Error(ErrKind::DefaultError,
              std::string("type ") + kind_keyword(k) + " has no scalar default");
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

std::string render_float(double v, bool single_precision) {
  char buf[64];
  std::to_chars_result res = single_precision
                                 ? std::to_chars(buf, buf + sizeof buf, static_cast<float>(v))
                                 : std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

namespace {

std::string render_bits(TypeKind k, uint64_t bits) {
  static const char* hex = "0123456789ABCDEF";
  int digits = width_bits(k) / 4;
  std::string s = "16#";
  for (int i = digits - 1; i >= 0; --i) s += hex[(bits >> (i * 4)) & 0xF];
  return s;
}

std::string escape_quoted(const std::string& v, char quote) {
  std::string out(1, quote);
  for (unsigned char c : v) {
    if (c == static_cast<unsigned char>(quote)) {
      out += '$';
      out += quote;
    } else if (c == '$') {
      out += "$$";
    } else if (c == '\n') {
      out += "$N";
    } else if (c == '\t') {
      out += "$T";
    } else if (c == '\r') {
      out += "$R";
    } else if (c < 0x20 || c >= 0x7f) {
      static const char* hexd = "0123456789ABCDEF";
      out += '$';
      out += hexd[c >> 4];
      out += hexd[c & 0xf];
    } else {
      out += static_cast<char>(c);
    }
  }
  out += quote;
  return out;
}

}  // namespace

std::string render_scalar(const Value& v) {
  switch (v.kind()) {
    case TypeKind::Sint: case TypeKind::Int: case TypeKind::Dint: case TypeKind::Lint:
      return std::to_string(v.i());
    case TypeKind::Usint: case TypeKind::Uint: case TypeKind::Udint: case TypeKind::Ulint:
      return std::to_string(v.u());
    case TypeKind::Byte: case TypeKind::Word: case TypeKind::Dword:
      return render_bits(v.kind(), v.u());
    case TypeKind::Real:
      return render_float(v.f(), true);
    case TypeKind::Lreal:
      return render_float(v.f(), false);
    case TypeKind::Bool:
      return v.b() ? "TRUE" : "FALSE";
    case TypeKind::String:
      return escape_quoted(v.s(), '\'');
    case TypeKind::WString:
      return escape_quoted(v.s(), '"');
    case TypeKind::Time:
      return render_duration(v.i());
    case TypeKind::Date:
      return render_date(v.i());
    case TypeKind::Tod:
      return render_tod(v.i());
    case TypeKind::Dt:
      return render_dt(v.i());
    case TypeKind::Enum:
      return v.type->name + "#" + std::get<EnumV>(v.payload).member;
    default:
      return std::string("<") + kind_keyword(v.kind()) + ">";
  }
}

}  // namespace stref
