#pragma once

#include <cstdint>
#include <string>

namespace har {

// Naive local time. Timestamps are seconds since 1970-01-01 00:00:00 with
// no timezone or leap-second handling; Date counts whole days on the same
// epoch. Text form is "YYYY-MM-DD HH:MM:SS".

using Timestamp = int64_t;
using Date = int32_t;

constexpr int64_t kSecondsPerDay = 86400;
constexpr int kMinutesPerDay = 1440;

Date days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(Date z, int& year, unsigned& month, unsigned& day);

inline Timestamp day_start(Date d) { return static_cast<Timestamp>(d) * kSecondsPerDay; }
inline Date date_of(Timestamp t) {
  // floor division for times before the epoch
  return static_cast<Date>(t >= 0 ? t / kSecondsPerDay
                                  : (t - kSecondsPerDay + 1) / kSecondsPerDay);
}

// Strict parse of "YYYY-MM-DD HH:MM:SS"; throws InputError on any deviation.
Timestamp parse_timestamp(const std::string& text);

// Strict parse of "YYYY-MM-DD".
Date parse_date(const std::string& text);

std::string format_timestamp(Timestamp t);
std::string format_date(Date d);

}  // namespace har
