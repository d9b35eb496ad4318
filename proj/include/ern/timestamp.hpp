#pragma once

#include <cctype>
#include <cerrno>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>

#include "ern/errors.hpp"
#include "ern/types.hpp"

namespace ern {

namespace detail {

// Days between 1970-01-01 and y-m-d in the proleptic Gregorian calendar.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline bool is_leap(std::int64_t y) {
  return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

inline unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[12] = {31, 28, 31, 30, 31, 30,
                                         31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return kDays[m - 1];
}

struct TsCursor {
  const std::string& s;
  std::size_t pos = 0;

  bool done() const { return pos >= s.size(); }
  char peek() const { return done() ? '\0' : s[pos]; }

  // Exactly n digits.
  long fixed(int n, const char* what) {
    long v = 0;
    for (int i = 0; i < n; ++i) {
      if (done() || !std::isdigit(static_cast<unsigned char>(s[pos])))
        throw ValidationError("bad timestamp '" + s + "': expected " + what);
      v = v * 10 + (s[pos++] - '0');
    }
    return v;
  }

  void expect(char c, const char* what) {
    if (done() || s[pos] != c)
      throw ValidationError("bad timestamp '" + s + "': expected " + what);
    ++pos;
  }
};

}  // namespace detail

// Parses either an integer (UTC milliseconds since the epoch) or an ISO 8601
// instant "YYYY-MM-DD[T ]hh:mm:ss[.fff][Z|+hh:mm|-hhmm]". A missing offset
// means UTC. The result is always UTC milliseconds.
inline TimestampMs parse_timestamp_ms(const std::string& text) {
  if (text.empty()) throw ValidationError("empty timestamp");

  bool all_digits = true;
  for (std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
       i < text.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
      all_digits = false;
      break;
    }
  }
  if (all_digits && text != "-" && text != "+") {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0')
      throw ValidationError("bad numeric timestamp '" + text + "'");
    return static_cast<TimestampMs>(v);
  }

  detail::TsCursor c{text};
  const long year = c.fixed(4, "year");
  c.expect('-', "'-' after year");
  const long month = c.fixed(2, "month");
  c.expect('-', "'-' after month");
  const long day = c.fixed(2, "day");
  if (c.peek() != 'T' && c.peek() != ' ')
    throw ValidationError("bad timestamp '" + text + "': expected 'T'");
  ++c.pos;
  const long hour = c.fixed(2, "hour");
  c.expect(':', "':' after hour");
  const long minute = c.fixed(2, "minute");
  c.expect(':', "':' after minute");
  const long second = c.fixed(2, "second");

  long millis = 0;
  if (c.peek() == '.') {
    ++c.pos;
    int digits = 0;
    long frac = 0;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) {
      if (digits < 3) frac = frac * 10 + (c.peek() - '0');
      ++digits;
      ++c.pos;
    }
    if (digits == 0)
      throw ValidationError("bad timestamp '" + text + "': empty fraction");
    while (digits < 3) {
      frac *= 10;
      ++digits;
    }
    millis = frac;
  }

  long offset_min = 0;
  if (!c.done()) {
    const char sign = c.peek();
    if (sign == 'Z') {
      ++c.pos;
    } else if (sign == '+' || sign == '-') {
      ++c.pos;
      const long oh = c.fixed(2, "offset hours");
      if (c.peek() == ':') ++c.pos;
      const long om = c.done() ? 0 : c.fixed(2, "offset minutes");
      offset_min = oh * 60 + om;
      if (sign == '-') offset_min = -offset_min;
    } else {
      throw ValidationError("bad timestamp '" + text + "': trailing garbage");
    }
  }
  if (!c.done())
    throw ValidationError("bad timestamp '" + text + "': trailing garbage");

  if (month < 1 || month > 12)
    throw ValidationError("bad timestamp '" + text + "': month out of range");
  if (day < 1 ||
      day > static_cast<long>(detail::days_in_month(year, static_cast<unsigned>(month))))
    throw ValidationError("bad timestamp '" + text + "': day out of range");
  if (hour > 23 || minute > 59 || second > 60)
    throw ValidationError("bad timestamp '" + text + "': time out of range");

  const std::int64_t days = detail::days_from_civil(
      year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  std::int64_t secs = days * 86400 + hour * 3600 + minute * 60 + second;
  secs -= offset_min * 60;  // normalize to UTC
  return secs * 1000 + millis;
}

}  // namespace ern
