// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stref {

constexpr int64_t kMsPerSecond = 1000;
constexpr int64_t kMsPerMinute = 60 * kMsPerSecond;
constexpr int64_t kMsPerHour = 60 * kMsPerMinute;
constexpr int64_t kMsPerDay = 24 * kMsPerHour;

// Proleptic Gregorian calendar, epoch 1970-01-01 = day 0.
int64_t days_from_civil(int64_t year, int month, int day);
void civil_from_days(int64_t days, int64_t& year, int& month, int& day);
bool valid_civil(int64_t year, int month, int day);

// Payload parsers; `payload` excludes the `PREFIX#` part. All throw
// Error(LiteralError) on malformed or out-of-range input.
int64_t parse_duration_ms(std::string_view payload);       // T#   -> signed ms
int64_t parse_tod_ms(std::string_view payload);            // TOD# -> ms in [0, kMsPerDay)
int64_t parse_date_days(std::string_view payload);         // D#   -> days since epoch
int64_t parse_dt_ms(std::string_view payload);             // DT#  -> ms since epoch

// Canonical renderings used by the snapshot wire format.
std::string render_duration(int64_t ms);   // T#<n>ms
std::string render_tod(int64_t ms);        // TOD#HH:MM:SS.mmm
std::string render_date(int64_t days);     // D#YYYY-MM-DD
std::string render_dt(int64_t ms);         // DT#YYYY-MM-DD-HH:MM:SS.mmm

// Floor-modulo into [0, kMsPerDay).
int64_t wrap_tod(int64_t ms);

}  // namespace stref
