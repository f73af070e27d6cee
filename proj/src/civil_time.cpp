#include "graphmpc/civil_time.hpp"

#include <cstdio>

#include "graphmpc/errors.hpp"

namespace graphmpc {

std::int64_t days_from_civil(const CivilDate& d) {
  // Howard Hinnant's era-based algorithm.
  std::int64_t y = d.year;
  y -= d.month <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      (153u * (d.month + (d.month > 2 ? -3 : 9)) + 2u) / 5u + d.day - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned day = doy - (153 * mp + 2) / 5 + 1;
  const unsigned month = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{static_cast<int>(y + (month <= 2)), static_cast<int>(month),
                   static_cast<int>(day)};
}

TimePoint to_time_point(const CivilTime& t) {
  return days_from_civil(t.date) * kSecondsPerDay + t.hour * 3600 +
         t.minute * 60 + t.second;
}

CivilTime to_civil(TimePoint t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    days -= 1;
  }
  CivilTime out;
  out.date = civil_from_days(days);
  out.hour = static_cast<int>(rem / 3600);
  out.minute = static_cast<int>((rem / 60) % 60);
  out.second = static_cast<int>(rem % 60);
  return out;
}

int weekday(TimePoint t) {
  std::int64_t days = t / kSecondsPerDay;
  if (t % kSecondsPerDay < 0) days -= 1;
  // 1970-01-01 was a Thursday.
  std::int64_t w = (days + 3) % 7;
  if (w < 0) w += 7;
  return static_cast<int>(w);
}

bool is_weekend(TimePoint t) { return weekday(t) >= 5; }

int seconds_of_day(TimePoint t) {
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) rem += kSecondsPerDay;
  return static_cast<int>(rem);
}

TimePoint parse_time_point(const std::string& text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const int len = static_cast<int>(text.size());
  int used = -1;
  // Longest layout first; the matched layout must consume the whole string.
  if (std::sscanf(text.c_str(), "%d-%d-%d %d:%d:%d%n", &y, &mo, &d, &h, &mi,
                  &s, &used) == 6 &&
      used == len) {
  } else if (used = -1, std::sscanf(text.c_str(), "%d-%d-%d %d:%d%n", &y,
                                    &mo, &d, &h, &mi, &used) == 5 &&
                            used == len) {
    s = 0;
  } else if (used = -1, std::sscanf(text.c_str(), "%d-%d-%d%n", &y, &mo, &d,
                                    &used) == 3 &&
                            used == len) {
    h = mi = s = 0;
  } else {
    throw ValidationError("unparseable timestamp: '" + text + "'");
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 ||
      mi > 59 || s < 0 || s > 59)
    throw ValidationError("timestamp field out of range: '" + text + "'");
  CivilDate date{y, mo, d};
  // Reject dates like Feb 30 by round-tripping.
  CivilDate back = civil_from_days(days_from_civil(date));
  if (back.year != y || back.month != mo || back.day != d)
    throw ValidationError("invalid calendar date: '" + text + "'");
  return to_time_point(CivilTime{date, h, mi, s});
}

std::string format_time_point(TimePoint t) {
  CivilTime c = to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d", c.date.year,
                c.date.month, c.date.day, c.hour, c.minute, c.second);
  return buf;
}

}  // namespace graphmpc
