#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "hourcast/hourstamp.hpp"

namespace hourcast {

inline constexpr int kHoursPerWeek = 168;
inline constexpr int kHoursPerDay = 24;

/// Gap-free hourly counts starting at a fixed hour. Entry k belongs to
/// start + k hours. Masked (invalid) hours keep their stored count but are
/// excluded from fitting and metrics; masking instead of deleting keeps week
/// alignment intact across exclusion windows.
class HourlyCountSeries {
public:
    HourlyCountSeries() = default;
    HourlyCountSeries(HourStamp start, std::vector<int> counts);
    HourlyCountSeries(HourStamp start, std::vector<int> counts, std::vector<std::uint8_t> valid);

    const HourStamp& start() const { return start_; }
    /// One past the last hour.
    HourStamp end() const;
    std::size_t size() const { return counts_.size(); }
    bool empty() const { return counts_.empty(); }

    HourStamp stamp_at(std::size_t k) const;
    int count_at(std::size_t k) const { return counts_[k]; }
    bool valid_at(std::size_t k) const { return valid_[k] != 0; }
    void set_valid(std::size_t k, bool v) { valid_[k] = v ? 1 : 0; }

    const std::vector<int>& counts() const { return counts_; }
    const std::vector<std::uint8_t>& valid() const { return valid_; }

    /// Index of the given hour, or nullopt when outside the series.
    std::optional<std::size_t> index_of(const HourStamp& ts) const;

    HourlyCountSeries slice(std::size_t first, std::size_t length) const;
    std::size_t valid_count() const;

private:
    HourStamp start_;
    std::vector<int> counts_;
    std::vector<std::uint8_t> valid_;
};

/// One Monday-aligned week of hourly values; index 0 is Monday 00:00.
struct WeekBlock {
    HourStamp week_start;
    std::array<double, kHoursPerWeek> values{};
    bool fully_observed = true;
};

struct Gaussian1D {
    double mean = 0.0;
    double variance = 0.0;

    double log_pdf(double x) const;
};

/// Point forecasts for the hours following `origin` (the last observed
/// hour): point[j] is the forecast for origin + 1 + j hours.
struct ForecastResult {
    HourStamp origin;
    int horizon_hours = 0;
    std::vector<double> point;
    std::optional<std::vector<double>> predictive_variance;

    HourStamp forecast_start() const { return add_hours(origin, 1); }
};

/// Chops a Monday-aligned series into whole weeks; the trailing partial week
/// is dropped. Blocks containing any masked hour have fully_observed=false.
/// Throws std::invalid_argument when the series does not start Monday 00:00.
std::vector<WeekBlock> slice_weeks(const HourlyCountSeries& series);

}  // namespace hourcast
