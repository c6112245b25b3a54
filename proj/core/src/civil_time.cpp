#include "har/civil_time.hpp"

#include <cstdio>

#include "har/error.hpp"

namespace har {

// Howard Hinnant's civil-days algorithms.
Date days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);           // [0, 399]
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;  // [0, 365]
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
  return static_cast<Date>(era * 146097 + static_cast<int>(doe) - 719468);
}

void civil_from_days(Date z, int& year, unsigned& month, unsigned& day) {
  int64_t zz = static_cast<int64_t>(z) + 719468;
  const int64_t era = (zz >= 0 ? zz : zz - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(zz - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const int y = static_cast<int>(yoe) + static_cast<int>(era) * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  day = doy - (153 * mp + 2) / 5 + 1;
  month = mp + (mp < 10 ? 3 : -9);
  year = y + (month <= 2);
}

namespace {

bool valid_date(int y, int m, int d) {
  static const int dim[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1) return false;
  int n = dim[m - 1];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) n = 29;
  return d <= n;
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  int y, mo, d, h, mi, s;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d %2d:%2d:%2d%n", &y, &mo, &d, &h,
                  &mi, &s, &consumed) != 6 ||
      consumed != static_cast<int>(text.size()) || text.size() != 19) {
    throw InputError("malformed timestamp '" + text + "' (expected YYYY-MM-DD HH:MM:SS)");
  }
  if (!valid_date(y, mo, d) || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 59)
    throw InputError("timestamp out of range '" + text + "'");
  return day_start(days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d))) +
         h * 3600 + mi * 60 + s;
}

Date parse_date(const std::string& text) {
  int y, mo, d;
  int consumed = 0;
  if (std::sscanf(text.c_str(), "%4d-%2d-%2d%n", &y, &mo, &d, &consumed) != 3 ||
      consumed != static_cast<int>(text.size()) || text.size() != 10 ||
      !valid_date(y, mo, d)) {
    throw InputError("malformed date '" + text + "' (expected YYYY-MM-DD)");
  }
  return days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
}

std::string format_timestamp(Timestamp t) {
  const Date d = date_of(t);
  int64_t sec = t - day_start(d);
  int year;
  unsigned month, day;
  civil_from_days(d, year, month, day);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u %02d:%02d:%02d", year, month, day,
                static_cast<int>(sec / 3600), static_cast<int>((sec / 60) % 60),
                static_cast<int>(sec % 60));
  return buf;
}

std::string format_date(Date d) {
  int year;
  unsigned month, day;
  civil_from_days(d, year, month, day);
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
  return buf;
}

}  // namespace har
