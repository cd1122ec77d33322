#pragma once

#include <array>
#include <cstdint>

#include "hourcast/series.hpp"

namespace hourcast {

/// Expected arrivals per hour, indexed by hour-of-week (0 = Monday 00:00).
struct WeeklyIntensityProfile {
    std::array<double, kHoursPerWeek> rates{};
    double base_rate = 0.0;
};

/// Weekly intensity with the observed hospital shape: quiet nights, a
/// morning surge peaking at 08:00, a smaller evening surge around 19-20,
/// lower Friday/Saturday traffic and a further dip over the Friday-sundown
/// to Saturday-sundown window. The profile is rescaled so its weekly mean
/// equals `base` (base 8.6/hour gives roughly 75k arrivals per year).
///
/// Requires base > 0, amps >= 0, factors in [0,1].
WeeklyIntensityProfile build_profile(double base, double morning_amp, double evening_amp,
                                     double weekend_factor, double shabbat_factor);

struct ProfileParams {
    double base = 8.6;
    double morning_amp = 7.0;
    double evening_amp = 3.0;
    double weekend_factor = 0.75;
    double shabbat_factor = 0.6;
};

inline WeeklyIntensityProfile build_profile(const ProfileParams& p) {
    return build_profile(p.base, p.morning_amp, p.evening_amp, p.weekend_factor, p.shabbat_factor);
}

/// Default series origin: the first Monday of 2004.
inline constexpr HourStamp kDefaultSynthStart{2004, 1, 5, 0};

/// Draws each hour's count independently Poisson(rate at its hour-of-week).
/// Deterministic given the seed; weeks use derived sub-seeds so per-week
/// generation could run in parallel without changing the output.
HourlyCountSeries simulate(const WeeklyIntensityProfile& profile, int n_weeks, std::uint64_t seed,
                           HourStamp week_start = kDefaultSynthStart);

}  // namespace hourcast
