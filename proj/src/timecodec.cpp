// SPDX-License-Identifier: Apache-2.0
#include "stref/timecodec.hpp"

#include <array>
#include <cctype>

#include "stref/error.hpp"

namespace stref {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrKind::LiteralError, msg); }

bool is_leap(int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int64_t y, int m) {
  static constexpr std::array<int, 12> base = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return base[m - 1];
}

struct Cursor {
  std::string_view s;
  size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }
  bool eat(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  // Unsigned decimal run; underscores are digit separators.
  int64_t number(int max_digits = 18) {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) bad("expected a digit");
    int64_t v = 0;
    int n = 0;
    while (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '_') {
      if (peek() == '_') {
        ++pos;
        continue;
      }
      if (++n > max_digits) bad("number too long");
      v = v * 10 + (s[pos++] - '0');
    }
    return v;
  }
};

// Decimal seconds field "SS" or "SS.fff" -> milliseconds (at most 3 fraction
// digits).
int64_t seconds_field_ms(Cursor& c) {
  int64_t sec = c.number();
  int64_t frac = 0;
  if (c.eat('.')) {
    int digits = 0;
    while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      if (digits < 3) frac = frac * 10 + (c.s[c.pos] - '0');
      ++digits;
      ++c.pos;
    }
    if (digits == 0) bad("expected fraction digits");
    if (digits > 3) bad("sub-millisecond precision is not representable");
    for (int i = digits; i < 3; ++i) frac *= 10;
  }
  return sec * kMsPerSecond + frac;
}

int64_t clock_ms(Cursor& c) {
  int64_t h = c.number();
  if (!c.eat(':')) bad("expected ':' in time of day");
  int64_t m = c.number();
  if (!c.eat(':')) bad("expected ':' in time of day");
  int64_t ms = seconds_field_ms(c);
  return h * kMsPerHour + m * kMsPerMinute + ms;
}

int64_t date_days(Cursor& c) {
  int64_t y = c.number();
  if (!c.eat('-')) bad("expected '-' in date");
  int64_t mo = c.number();
  if (!c.eat('-')) bad("expected '-' in date");
  int64_t d = c.number();
  if (!valid_civil(y, static_cast<int>(mo), static_cast<int>(d)))
    bad("invalid calendar date");
  return days_from_civil(y, static_cast<int>(mo), static_cast<int>(d));
}

}  // namespace

int64_t days_from_civil(int64_t y, int m, int d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const int64_t yoe = y - era * 400;
  const int64_t doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

void civil_from_days(int64_t z, int64_t& year, int& month, int& day) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const int64_t doe = z - era * 146097;
  const int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int64_t y = yoe + era * 400;
  const int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const int64_t mp = (5 * doy + 2) / 153;
  day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  year = y + (month <= 2);
}

bool valid_civil(int64_t year, int month, int day) {
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  return true;
}

int64_t wrap_tod(int64_t ms) {
  int64_t r = ms % kMsPerDay;
  return r < 0 ? r + kMsPerDay : r;
}

int64_t parse_duration_ms(std::string_view payload) {
  Cursor c{payload};
  bool negative = c.eat('-');
  int64_t total = 0;
  bool any = false;
  // Components in order d, h, m, s, ms; each optional, each may carry a
  // decimal fraction as long as the result lands on a whole millisecond.
  struct Unit {
    const char* suffix;
    int64_t ms;
  };
  static constexpr Unit units[] = {
      {"d", kMsPerDay}, {"h", kMsPerHour}, {"m", kMsPerMinute}, {"s", kMsPerSecond}, {"ms", 1}};
  size_t next_unit = 0;
  while (!c.done()) {
    int64_t whole = c.number();
    int64_t frac_num = 0, frac_den = 1;
    if (c.eat('.')) {
      while (std::isdigit(static_cast<unsigned char>(c.peek()))) {
        if (frac_den > 1000000000000LL) bad("fraction too long");
        frac_num = frac_num * 10 + (c.s[c.pos] - '0');
        frac_den *= 10;
        ++c.pos;
      }
      if (frac_den == 1) bad("expected fraction digits");
    }
    // unit suffix, lower or upper case; "ms" must be checked before "m"
    std::string suffix;
    while (std::isalpha(static_cast<unsigned char>(c.peek()))) {
      suffix.push_back(static_cast<char>(
          std::tolower(static_cast<unsigned char>(c.s[c.pos]))));
      ++c.pos;
    }
    size_t ui = next_unit;
    while (ui < 5 && suffix != units[ui].suffix) ++ui;
    if (ui >= 5) bad("bad or out-of-order duration unit '" + suffix + "'");
    next_unit = ui + 1;
    int64_t unit_ms = units[ui].ms;
    if ((frac_num * unit_ms) % frac_den != 0)
      bad("duration fraction is not a whole number of milliseconds");
    total += whole * unit_ms + frac_num * unit_ms / frac_den;
    any = true;
    c.eat('_');  // separators like T#1d_2h are tolerated
  }
  if (!any) bad("empty duration");
  return negative ? -total : total;
}

int64_t parse_tod_ms(std::string_view payload) {
  Cursor c{payload};
  int64_t ms = clock_ms(c);
  if (!c.done()) bad("trailing characters in time of day");
  if (ms < 0) bad("negative time of day");
  return wrap_tod(ms);
}

int64_t parse_date_days(std::string_view payload) {
  Cursor c{payload};
  int64_t days = date_days(c);
  if (!c.done()) bad("trailing characters in date");
  return days;
}

int64_t parse_dt_ms(std::string_view payload) {
  Cursor c{payload};
  int64_t days = date_days(c);
  if (!c.eat('-')) bad("expected '-' between date and time");
  int64_t ms = clock_ms(c);
  if (!c.done()) bad("trailing characters in date and time");
  if (ms < 0 || ms >= kMsPerDay) bad("time of day out of range");
  return days * kMsPerDay + ms;
}

std::string render_duration(int64_t ms) { return "T#" + std::to_string(ms) + "ms"; }

namespace {
std::string pad2(int64_t v) {
  std::string s = std::to_string(v);
  return s.size() < 2 ? "0" + s : s;
}
std::string pad3(int64_t v) {
  std::string s = std::to_string(v);
  while (s.size() < 3) s.insert(s.begin(), '0');
  return s;
}
std::string clock_text(int64_t ms) {
  return pad2(ms / kMsPerHour) + ":" + pad2(ms % kMsPerHour / kMsPerMinute) + ":" +
         pad2(ms % kMsPerMinute / kMsPerSecond) + "." + pad3(ms % kMsPerSecond);
}
std::string date_text(int64_t days) {
  int64_t y;
  int mo, d;
  civil_from_days(days, y, mo, d);
  std::string ys = std::to_string(y);
  while (ys.size() < 4) ys.insert(ys.begin(), '0');
  return ys + "-" + pad2(mo) + "-" + pad2(d);
}
}  // namespace

std::string render_tod(int64_t ms) { return "TOD#" + clock_text(ms); }

std::string render_date(int64_t days) { return "D#" + date_text(days); }

std::string render_dt(int64_t ms) {
  int64_t days = ms / kMsPerDay;
  int64_t rem = ms % kMsPerDay;
  if (rem < 0) {
    rem += kMsPerDay;
    --days;
  }
  return "DT#" + date_text(days) + "-" + clock_text(rem);
}

}  // namespace stref
