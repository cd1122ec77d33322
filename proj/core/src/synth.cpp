#include "hourcast/synth.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hourcast {

namespace {

double gauss_bump(double hour, double center, double width) {
    const double d = (hour - center) / width;
    return std::exp(-0.5 * d * d);
}

}  // namespace

WeeklyIntensityProfile build_profile(double base, double morning_amp, double evening_amp,
                                     double weekend_factor, double shabbat_factor) {
    if (base <= 0.0) throw std::invalid_argument("build_profile: base must be positive");
    if (morning_amp < 0.0 || evening_amp < 0.0)
        throw std::invalid_argument("build_profile: amplitudes must be non-negative");
    if (weekend_factor < 0.0 || weekend_factor > 1.0 || shabbat_factor < 0.0 ||
        shabbat_factor > 1.0)
        throw std::invalid_argument("build_profile: factors must lie in [0,1]");

    WeeklyIntensityProfile profile;
    profile.base_rate = base;
    double total = 0.0;
    for (int h = 0; h < kHoursPerWeek; ++h) {
        const int day = h / kHoursPerDay;   // 0 = Monday
        const int hod = h % kHoursPerDay;
        // Nights sit at the plain base; the broad morning bump carries the
        // daytime elevation and the narrow evening bump the 19-20 surge.
        double rate = base + morning_amp * gauss_bump(hod, 8.0, 3.5) +
                      evening_amp * gauss_bump(hod, 19.5, 1.8);
        if (day == 4 || day == 5) rate *= weekend_factor;  // Friday, Saturday
        const bool shabbat = (day == 4 && hod >= 18) || (day == 5 && hod < 18);
        if (shabbat) rate *= shabbat_factor;
        profile.rates[static_cast<std::size_t>(h)] = rate;
        total += rate;
    }
    // Rescale so the weekly mean equals base; annual volume then tracks
    // base * 8766 regardless of the shape parameters.
    const double scale = base * kHoursPerWeek / total;
    for (auto& r : profile.rates) r *= scale;
    return profile;
}

HourlyCountSeries simulate(const WeeklyIntensityProfile& profile, int n_weeks, std::uint64_t seed,
                           HourStamp week_start) {
    if (n_weeks < 1) throw std::invalid_argument("simulate: n_weeks must be >= 1");
    if (!is_week_start(week_start))
        throw std::invalid_argument("simulate: start must be a Monday 00:00");
    for (double r : profile.rates)
        if (r < 0.0) throw std::invalid_argument("simulate: negative rate");

    std::vector<int> counts;
    counts.reserve(static_cast<std::size_t>(n_weeks) * kHoursPerWeek);
    for (int w = 0; w < n_weeks; ++w) {
        std::seed_seq sub_seed{static_cast<std::uint32_t>(seed & 0xffffffffu),
                               static_cast<std::uint32_t>(seed >> 32),
                               static_cast<std::uint32_t>(w)};
        std::mt19937_64 rng(sub_seed);
        for (int h = 0; h < kHoursPerWeek; ++h) {
            const double rate = profile.rates[static_cast<std::size_t>(h)];
            if (rate <= 0.0) {
                counts.push_back(0);
                continue;
            }
            std::poisson_distribution<int> poisson(rate);
            counts.push_back(poisson(rng));
        }
    }
    return {week_start, std::move(counts)};
}

}  // namespace hourcast
