#pragma once

#include <span>
#include <string>
#include <vector>

#include "hourcast/csv.hpp"
#include "hourcast/series.hpp"

namespace hourcast {

/// One admission. Only the arrival timestamp drives the models; the
/// department label is informational (all departments are pooled).
struct ArrivalEvent {
    HourStamp hour;  // arrival time floored to its hour bucket
    int minute = 0;
    std::string department;
};

struct WeatherSeries {
    HourStamp start;
    std::vector<double> tmax;  // degrees Celsius, one per hour, gap-free
};

/// Half-open hour range [begin, end).
struct HourRange {
    HourStamp begin;
    HourStamp end;
};

/// Train/test windows plus exclusion ranges, all half-open. The shipped
/// default trains on 2004-2005, tests on the first ten months of 2007 and
/// masks the whole of 2006.
struct SplitSpec {
    HourStamp train_start;
    HourStamp train_end;
    HourStamp test_start;
    HourStamp test_end;
    std::vector<HourRange> exclusions;

    void validate() const;
    static SplitSpec rambam_default();
};

/// Reads "patient_id,arrival_time,department" with minute-precision
/// timestamps (YYYY-MM-DD HH:MM). Rows come back chronologically sorted
/// regardless of input order. Throws ParseError naming the line on bad rows.
std::vector<ArrivalEvent> parse_arrival_events(const std::string& path);

/// Reads "timestamp,tmax_c"; interior gaps are forward-filled from the last
/// reading.
WeatherSeries read_weather_csv(const std::string& path);

/// Buckets events into [h, h+1h) counts over the window; hours without
/// events get 0, events outside the window are dropped.
HourlyCountSeries aggregate_hourly(std::span<const ArrivalEvent> events, const HourRange& window);

/// Masks every hour inside any exclusion range (clipped to the series span).
/// Counts are preserved.
HourlyCountSeries apply_exclusions(HourlyCountSeries series, const SplitSpec& spec);

struct TrainTestSplit {
    HourlyCountSeries train;
    HourlyCountSeries test;
    bool test_empty = false;
};

/// Cuts the masked series into Monday-aligned train/test pieces. Each piece
/// is trimmed forward to its first Monday 00:00. Throws when the training
/// part ends up empty; an empty test part is flagged, not fatal.
TrainTestSplit split(const HourlyCountSeries& series, const SplitSpec& spec);

/// Aligns weather to the series hours: result[k] is tmax at series hour k,
/// forward-filled across missing trailing hours. Throws when the weather
/// starts after the series (nothing to fill the leading hours from).
std::vector<double> join_weather(const HourlyCountSeries& series, const WeatherSeries& weather);

}  // namespace hourcast
