#include "hourcast/series.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hourcast {

HourlyCountSeries::HourlyCountSeries(HourStamp start, std::vector<int> counts)
    : HourlyCountSeries(start, std::move(counts), {}) {}

HourlyCountSeries::HourlyCountSeries(HourStamp start, std::vector<int> counts,
                                     std::vector<std::uint8_t> valid)
    : start_(start), counts_(std::move(counts)), valid_(std::move(valid)) {
    if (!is_valid(start_)) throw std::invalid_argument("HourlyCountSeries: invalid start stamp");
    if (valid_.empty()) valid_.assign(counts_.size(), 1);
    if (valid_.size() != counts_.size())
        throw std::invalid_argument("HourlyCountSeries: counts/valid length mismatch");
    for (int c : counts_)
        if (c < 0) throw std::invalid_argument("HourlyCountSeries: negative count");
}

HourStamp HourlyCountSeries::end() const {
    return add_hours(start_, static_cast<std::int64_t>(counts_.size()));
}

HourStamp HourlyCountSeries::stamp_at(std::size_t k) const {
    return add_hours(start_, static_cast<std::int64_t>(k));
}

std::optional<std::size_t> HourlyCountSeries::index_of(const HourStamp& ts) const {
    const std::int64_t offset = hours_between(start_, ts);
    if (offset < 0 || offset >= static_cast<std::int64_t>(counts_.size())) return std::nullopt;
    return static_cast<std::size_t>(offset);
}

HourlyCountSeries HourlyCountSeries::slice(std::size_t first, std::size_t length) const {
    if (first > counts_.size() || first + length > counts_.size())
        throw std::out_of_range("HourlyCountSeries::slice: range outside series");
    std::vector<int> c(counts_.begin() + static_cast<std::ptrdiff_t>(first),
                       counts_.begin() + static_cast<std::ptrdiff_t>(first + length));
    std::vector<std::uint8_t> v(valid_.begin() + static_cast<std::ptrdiff_t>(first),
                                valid_.begin() + static_cast<std::ptrdiff_t>(first + length));
    return {stamp_at(first), std::move(c), std::move(v)};
}

std::size_t HourlyCountSeries::valid_count() const {
    std::size_t n = 0;
    for (auto v : valid_) n += v != 0;
    return n;
}

double Gaussian1D::log_pdf(double x) const {
    const double d = x - mean;
    return -0.5 * (d * d / variance + std::log(2.0 * std::numbers::pi * variance));
}

std::vector<WeekBlock> slice_weeks(const HourlyCountSeries& series) {
    if (series.empty()) return {};
    if (!is_week_start(series.start()))
        throw std::invalid_argument("slice_weeks: series must start on Monday 00:00");
    const std::size_t n_weeks = series.size() / kHoursPerWeek;
    std::vector<WeekBlock> blocks;
    blocks.reserve(n_weeks);
    for (std::size_t w = 0; w < n_weeks; ++w) {
        WeekBlock block;
        block.week_start = series.stamp_at(w * kHoursPerWeek);
        for (std::size_t j = 0; j < kHoursPerWeek; ++j) {
            const std::size_t k = w * kHoursPerWeek + j;
            block.values[j] = static_cast<double>(series.count_at(k));
            if (!series.valid_at(k)) block.fully_observed = false;
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

}  // namespace hourcast
