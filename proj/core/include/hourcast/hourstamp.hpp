#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hourcast {

/// A timezone-naive wall-clock hour boundary. Minutes and seconds are
/// implicitly zero. Field order makes the default lexicographic comparison
/// chronological.
struct HourStamp {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;   // 0..23

    friend constexpr auto operator<=>(const HourStamp&, const HourStamp&) = default;
};

bool is_valid(const HourStamp& ts);

/// Hours elapsed since 1970-01-01T00:00 (negative before the epoch).
std::int64_t hour_index(const HourStamp& ts);
HourStamp from_hour_index(std::int64_t index);

HourStamp add_hours(const HourStamp& ts, std::int64_t n);

/// to - from, in hours.
std::int64_t hours_between(const HourStamp& from, const HourStamp& to);

/// 0 = Monday ... 6 = Sunday.
int day_of_week(const HourStamp& ts);

/// Position within a Monday-anchored week: Monday 00:00 -> 0, Sunday 23:00 -> 167.
int hour_of_week(const HourStamp& ts);

/// True for Monday 00:00.
bool is_week_start(const HourStamp& ts);

/// "YYYY-MM-DDTHH:00"
std::string to_string(const HourStamp& ts);

/// Parses "YYYY-MM-DDTHH:MM" (a space also accepted as separator). Minutes
/// must be zero. Returns nullopt on malformed or out-of-range input.
std::optional<HourStamp> parse_hour(std::string_view text);

/// Parses "YYYY-MM-DD" as that day's 00:00.
std::optional<HourStamp> parse_date(std::string_view text);

/// Accepts either a bare date or a full hour timestamp.
std::optional<HourStamp> parse_point(std::string_view text);

}  // namespace hourcast
