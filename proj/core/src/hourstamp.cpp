#include "hourcast/hourstamp.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace hourcast {

namespace {

// Howard Hinnant's civil calendar algorithms.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lengths{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[static_cast<std::size_t>(m - 1)];
}

bool parse_int(std::string_view s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

bool is_valid(const HourStamp& ts) {
    return ts.month >= 1 && ts.month <= 12 && ts.day >= 1 &&
           ts.day <= days_in_month(ts.year, ts.month) && ts.hour >= 0 && ts.hour <= 23;
}

std::int64_t hour_index(const HourStamp& ts) {
    return days_from_civil(ts.year, ts.month, ts.day) * 24 + ts.hour;
}

HourStamp from_hour_index(std::int64_t index) {
    std::int64_t days = index / 24;
    std::int64_t hour = index % 24;
    if (hour < 0) {
        hour += 24;
        days -= 1;
    }
    HourStamp ts;
    civil_from_days(days, ts.year, ts.month, ts.day);
    ts.hour = static_cast<int>(hour);
    return ts;
}

HourStamp add_hours(const HourStamp& ts, std::int64_t n) {
    return from_hour_index(hour_index(ts) + n);
}

std::int64_t hours_between(const HourStamp& from, const HourStamp& to) {
    return hour_index(to) - hour_index(from);
}

int day_of_week(const HourStamp& ts) {
    // 1970-01-01 was a Thursday (3 in Monday-based indexing).
    const std::int64_t d = days_from_civil(ts.year, ts.month, ts.day);
    return static_cast<int>(((d % 7) + 7 + 3) % 7);
}

int hour_of_week(const HourStamp& ts) { return day_of_week(ts) * 24 + ts.hour; }

bool is_week_start(const HourStamp& ts) { return hour_of_week(ts) == 0; }

std::string to_string(const HourStamp& ts) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:00", ts.year, ts.month, ts.day, ts.hour);
    return buf;
}

std::optional<HourStamp> parse_hour(std::string_view text) {
    // YYYY-MM-DD[T ]HH:MM
    if (text.size() != 16) return std::nullopt;
    if (text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
        text[13] != ':')
        return std::nullopt;
    HourStamp ts;
    int minute = 0;
    if (!parse_int(text.substr(0, 4), ts.year) || !parse_int(text.substr(5, 2), ts.month) ||
        !parse_int(text.substr(8, 2), ts.day) || !parse_int(text.substr(11, 2), ts.hour) ||
        !parse_int(text.substr(14, 2), minute))
        return std::nullopt;
    if (minute != 0 || !is_valid(ts)) return std::nullopt;
    return ts;
}

std::optional<HourStamp> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    HourStamp ts;
    if (!parse_int(text.substr(0, 4), ts.year) || !parse_int(text.substr(5, 2), ts.month) ||
        !parse_int(text.substr(8, 2), ts.day))
        return std::nullopt;
    ts.hour = 0;
    if (!is_valid(ts)) return std::nullopt;
    return ts;
}

std::optional<HourStamp> parse_point(std::string_view text) {
    if (auto d = parse_date(text)) return d;
    return parse_hour(text);
}

}  // namespace hourcast
