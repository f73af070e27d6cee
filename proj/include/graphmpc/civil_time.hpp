#pragma once

// Calendar helpers on top of a plain epoch-seconds time point. Everything is
// timezone-naive: timestamps are interpreted as local wall-clock time.

#include <cstdint>
#include <string>

namespace graphmpc {

// Seconds since 1970-01-01 00:00:00.
using TimePoint = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

struct CivilDate {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
};

struct CivilTime {
  CivilDate date;
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Days since the epoch for a proleptic Gregorian date.
std::int64_t days_from_civil(const CivilDate& d);
CivilDate civil_from_days(std::int64_t days);

TimePoint to_time_point(const CivilTime& t);
CivilTime to_civil(TimePoint t);

// 0 = Monday .. 6 = Sunday.
int weekday(TimePoint t);
bool is_weekend(TimePoint t);

// Seconds elapsed since local midnight, in [0, 86400).
int seconds_of_day(TimePoint t);

// Accepts "YYYY-MM-DD", "YYYY-MM-DD HH:MM" and "YYYY-MM-DD HH:MM:SS".
// Throws ValidationError on anything else.
TimePoint parse_time_point(const std::string& text);

// "YYYY-MM-DD HH:MM:SS"
std::string format_time_point(TimePoint t);

}  // namespace graphmpc
