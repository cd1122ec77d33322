#pragma once

#include "hourcast/forecaster.hpp"

namespace hourcast {

/// Weekly persistence: next week's forecast is last week's observed counts.
/// Horizons under 168 take the week's prefix. Throws ContextError on a
/// masked input week.
ForecastResult naive_forecast(const WeekBlock& last_week, int horizon_hours);

class NaiveForecaster final : public Forecaster {
public:
    std::string name() const override { return "naive"; }
    int horizon_hours() const override { return kHoursPerWeek; }
    void fit(const HourlyCountSeries&, const std::vector<double>*) override {}
    ForecastResult forecast(const ForecastInput& input, int horizon_hours) override;
};

}  // namespace hourcast
