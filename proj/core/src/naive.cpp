#include "hourcast/naive.hpp"

#include <algorithm>
#include <stdexcept>

namespace hourcast {

namespace {

// Monday-aligned whole weeks ending at the history's end, newest first.
// Returns the first fully observed one.
std::optional<WeekBlock> scan_back_for_week(const HourlyCountSeries& history) {
    if (history.size() < kHoursPerWeek) return std::nullopt;
    if (hour_of_week(history.end()) != 0) return std::nullopt;  // origin must be a Monday
    std::int64_t first = static_cast<std::int64_t>(history.size()) - kHoursPerWeek;
    for (; first >= 0; first -= kHoursPerWeek) {
        WeekBlock block;
        block.week_start = history.stamp_at(static_cast<std::size_t>(first));
        bool observed = true;
        for (int j = 0; j < kHoursPerWeek; ++j) {
            const std::size_t k = static_cast<std::size_t>(first) + static_cast<std::size_t>(j);
            block.values[static_cast<std::size_t>(j)] = static_cast<double>(history.count_at(k));
            if (!history.valid_at(k)) observed = false;
        }
        if (observed) return block;
    }
    return std::nullopt;
}

}  // namespace

std::optional<WeekBlock> last_observed_week(const HourlyCountSeries& history) {
    return scan_back_for_week(history);
}

std::vector<WeekBlock> last_observed_weeks(const HourlyCountSeries& history, int n) {
    std::vector<WeekBlock> weeks;
    if (history.size() < kHoursPerWeek || hour_of_week(history.end()) != 0) return weeks;
    std::int64_t first = static_cast<std::int64_t>(history.size()) - kHoursPerWeek;
    for (; first >= 0 && static_cast<int>(weeks.size()) < n; first -= kHoursPerWeek) {
        WeekBlock block;
        block.week_start = history.stamp_at(static_cast<std::size_t>(first));
        block.fully_observed = true;
        for (int j = 0; j < kHoursPerWeek; ++j) {
            const std::size_t k = static_cast<std::size_t>(first) + static_cast<std::size_t>(j);
            block.values[static_cast<std::size_t>(j)] = static_cast<double>(history.count_at(k));
            if (!history.valid_at(k)) block.fully_observed = false;
        }
        if (block.fully_observed) weeks.push_back(std::move(block));
    }
    std::reverse(weeks.begin(), weeks.end());
    return weeks;
}

ForecastResult naive_forecast(const WeekBlock& last_week, int horizon_hours) {
    if (!last_week.fully_observed)
        throw ContextError("naive_forecast: input week contains masked hours");
    if (horizon_hours < 1 || horizon_hours > kHoursPerWeek)
        throw std::invalid_argument("naive_forecast: horizon must be in [1,168]");
    ForecastResult out;
    out.origin = add_hours(last_week.week_start, kHoursPerWeek - 1);
    out.horizon_hours = horizon_hours;
    out.point.assign(last_week.values.begin(), last_week.values.begin() + horizon_hours);
    return out;
}

ForecastResult NaiveForecaster::forecast(const ForecastInput& input, int horizon_hours) {
    const auto week = last_observed_week(input.history);
    if (!week) throw ContextError("naive: no fully observed week precedes the origin");
    ForecastResult out = naive_forecast(*week, horizon_hours);
    // the returned origin is the actual end of history, which may be later
    // than the persisted week when masked weeks were skipped
    out.origin = add_hours(input.history.end(), -1);
    return out;
}

}  // namespace hourcast
