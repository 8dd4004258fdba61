#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <string_view>

namespace tradepack {

/// Calendar date stored as days since 1970-01-01.
struct Date {
  std::int32_t days = 0;

  auto operator<=>(const Date&) const = default;

  static Date from_ymd(int year, unsigned month, unsigned day);
  /// Parses `YYYY-MM-DD`; throws Error{MalformedRow} on anything else.
  static Date parse(std::string_view text);
  std::string to_string() const;
  /// 0 = Monday ... 6 = Sunday.
  int weekday() const;
};

struct Timestamp {
  Date date;
  std::int32_t seconds = 0;  // seconds since midnight

  auto operator<=>(const Timestamp&) const = default;
};

/// Parses `HH:MM:SS` into seconds since midnight.
std::int32_t parse_clock(std::string_view text);
std::string format_clock(std::int32_t seconds);

/// Continuous-auction sessions 09:30-11:30 and 13:00-15:00. The trading clock
/// glues the two sessions so that 11:30 and 13:00 are the same instant.
namespace day_clock {

inline constexpr std::int32_t kMorningOpen = 9 * 3600 + 30 * 60;
inline constexpr std::int32_t kMorningClose = 11 * 3600 + 30 * 60;
inline constexpr std::int32_t kAfternoonOpen = 13 * 3600;
inline constexpr std::int32_t kAfternoonClose = 15 * 3600;
inline constexpr std::int32_t kDaySeconds = 14400;   // D
inline constexpr std::int32_t kHalfDay = kDaySeconds / 2;

bool in_session(std::int32_t seconds_of_day) noexcept;

/// Trading-clock seconds since the open, in [0, D]. Throws OutOfSession.
std::int32_t offset(std::int32_t seconds_of_day);

/// t/D in [0, 1].
double normalize(std::int32_t seconds_of_day);

/// One-second grid slot in [0, D). Morning seconds occupy [0, D/2), afternoon
/// seconds [D/2, D); the closing instants 11:30:00 and 15:00:00 share the slot
/// of the second before them.
std::int32_t slot(std::int32_t seconds_of_day);

/// Wall-clock second that opens a grid slot.
std::int32_t slot_seconds(std::int32_t slot);

/// First slot of the session containing `slot` (0 or D/2).
inline constexpr std::int32_t session_start(std::int32_t slot) noexcept {
  return slot < kHalfDay ? 0 : kHalfDay;
}

}  // namespace day_clock
}  // namespace tradepack
