#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hourcast/series.hpp"

namespace hourcast {

/// Everything a model may look at when forecasting: the observed history
/// ending exactly one hour before the first forecast hour, plus optional
/// hourly maximum temperature aligned with it.
struct ForecastInput {
    const HourlyCountSeries& history;
    const std::vector<double>* tmax = nullptr;
};

/// Raised by a model that cannot produce a forecast from the provided
/// context (for example no fully observed week precedes the origin).
class ContextError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Common surface for all registered models. Stateful models (the
/// time-varying linear one) are allowed to consume newly observed context
/// hours inside forecast(); the harness always hands them true observations,
/// never their own forecasts.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    virtual std::string name() const = 0;

    /// Hours forecast per evaluation window; kFullSpan means fit once and
    /// forecast the entire test span in one window.
    virtual int horizon_hours() const = 0;
    static constexpr int kFullSpan = 0;

    virtual void fit(const HourlyCountSeries& train, const std::vector<double>* train_tmax) = 0;

    virtual ForecastResult forecast(const ForecastInput& input, int horizon_hours) = 0;
};

/// Most recent fully observed Monday-aligned week strictly before the end of
/// `history`, scanning back week by week. Masked weeks are skipped, which
/// mirrors the evaluation protocol's wholesale removal of excluded spans.
std::optional<WeekBlock> last_observed_week(const HourlyCountSeries& history);

/// The `n` most recent fully observed weeks, oldest first.
std::vector<WeekBlock> last_observed_weeks(const HourlyCountSeries& history, int n);

}  // namespace hourcast
