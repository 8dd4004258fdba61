#include "tradepack/day_clock.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "tradepack/error.hpp"

namespace tradepack {

namespace {

template <typename Int>
bool parse_fixed(std::string_view text, Int& out) {
  if (text.empty()) return false;
  for (char ch : text) {
    if (ch < '0' || ch > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw Error(ErrorCode::MalformedRow, "invalid calendar date");
  }
  return Date{static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count())};
}

Date Date::parse(std::string_view text) {
  int year = 0;
  unsigned month = 0;
  unsigned day = 0;
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
      !parse_fixed(text.substr(0, 4), year) || !parse_fixed(text.substr(5, 2), month) ||
      !parse_fixed(text.substr(8, 2), day)) {
    throw Error(ErrorCode::MalformedRow, "bad date '" + std::string(text) + "'");
  }
  return from_ymd(year, month, day);
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::weekday() const {
  // 1970-01-01 was a Thursday.
  const int w = (days % 7 + 7 + 3) % 7;
  return w;
}

std::int32_t parse_clock(std::string_view text) {
  int h = 0;
  int m = 0;
  int s = 0;
  if (text.size() != 8 || text[2] != ':' || text[5] != ':' || !parse_fixed(text.substr(0, 2), h) ||
      !parse_fixed(text.substr(3, 2), m) || !parse_fixed(text.substr(6, 2), s) || h > 23 ||
      m > 59 || s > 59) {
    throw Error(ErrorCode::MalformedRow, "bad time '" + std::string(text) + "'");
  }
  return h * 3600 + m * 60 + s;
}

std::string format_clock(std::int32_t seconds) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d", seconds / 3600, (seconds / 60) % 60,
                seconds % 60);
  return buf;
}

namespace day_clock {

bool in_session(std::int32_t s) noexcept {
  return (s >= kMorningOpen && s <= kMorningClose) ||
         (s >= kAfternoonOpen && s <= kAfternoonClose);
}

std::int32_t offset(std::int32_t s) {
  if (s >= kMorningOpen && s <= kMorningClose) return s - kMorningOpen;
  if (s >= kAfternoonOpen && s <= kAfternoonClose) return s - kAfternoonOpen + kHalfDay;
  throw Error(ErrorCode::OutOfSession, "time " + format_clock(s) + " is outside the sessions");
}

double normalize(std::int32_t s) {
  return static_cast<double>(offset(s)) / kDaySeconds;
}

std::int32_t slot(std::int32_t s) {
  if (s >= kMorningOpen && s <= kMorningClose) {
    return s == kMorningClose ? kHalfDay - 1 : s - kMorningOpen;
  }
  if (s >= kAfternoonOpen && s <= kAfternoonClose) {
    return s == kAfternoonClose ? kDaySeconds - 1 : s - kAfternoonOpen + kHalfDay;
  }
  throw Error(ErrorCode::OutOfSession, "time " + format_clock(s) + " is outside the sessions");
}

std::int32_t slot_seconds(std::int32_t slot_index) {
  if (slot_index < 0 || slot_index >= kDaySeconds) {
    throw Error(ErrorCode::InvalidArgument, "grid slot out of range");
  }
  return slot_index < kHalfDay ? kMorningOpen + slot_index
                               : kAfternoonOpen + (slot_index - kHalfDay);
}

}  // namespace day_clock
}  // namespace tradepack
