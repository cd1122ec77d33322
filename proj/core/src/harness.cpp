#include "hourcast/harness.hpp"

#include <chrono>
#include <stdexcept>

#include "hourcast/metrics.hpp"

namespace hourcast {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// train + masked gap + test as one continuous context series. The gap keeps
// week alignment; its hours are masked so no model treats them as data.
HourlyCountSeries combined_context(const HourlyCountSeries& train, const HourlyCountSeries& test) {
    const std::int64_t gap = hours_between(train.end(), test.start());
    if (gap < 0) throw std::invalid_argument("rolling_evaluate: test precedes train end");
    std::vector<int> counts;
    std::vector<std::uint8_t> valid;
    counts.reserve(train.size() + static_cast<std::size_t>(gap) + test.size());
    counts.insert(counts.end(), train.counts().begin(), train.counts().end());
    valid.insert(valid.end(), train.valid().begin(), train.valid().end());
    counts.insert(counts.end(), static_cast<std::size_t>(gap), 0);
    valid.insert(valid.end(), static_cast<std::size_t>(gap), 0);
    counts.insert(counts.end(), test.counts().begin(), test.counts().end());
    valid.insert(valid.end(), test.valid().begin(), test.valid().end());
    return {train.start(), std::move(counts), std::move(valid)};
}

std::vector<double> combined_tmax(const HourlyCountSeries& train, const HourlyCountSeries& test,
                                  const std::vector<double>* train_tmax,
                                  const std::vector<double>* test_tmax) {
    const std::size_t gap = static_cast<std::size_t>(hours_between(train.end(), test.start()));
    std::vector<double> out;
    out.reserve(train.size() + gap + test.size());
    out.insert(out.end(), train_tmax->begin(), train_tmax->end());
    const double filler = train_tmax->empty() ? 0.0 : train_tmax->back();
    out.insert(out.end(), gap, filler);
    out.insert(out.end(), test_tmax->begin(), test_tmax->end());
    return out;
}

}  // namespace

EvalResult rolling_evaluate(Forecaster& model, const HourlyCountSeries& train,
                            const HourlyCountSeries& test, const std::vector<double>* train_tmax,
                            const std::vector<double>* test_tmax) {
    if (test.empty()) throw std::invalid_argument("rolling_evaluate: empty test span");

    EvalResult result;
    result.row.model = model.name();

    const auto t_fit = Clock::now();
    model.fit(train, train_tmax);
    result.row.training_time_s = seconds_since(t_fit);
    result.row.has_training_time = model.name() != "naive";

    const bool full_span = model.horizon_hours() == Forecaster::kFullSpan;
    const int horizon = full_span ? static_cast<int>(test.size()) : model.horizon_hours();
    if (static_cast<int>(test.size()) < horizon)
        throw std::invalid_argument("rolling_evaluate: test span shorter than one horizon");

    const HourlyCountSeries context_all = combined_context(train, test);
    std::vector<double> tmax_all;
    const bool have_tmax = train_tmax && test_tmax;
    if (have_tmax) tmax_all = combined_tmax(train, test, train_tmax, test_tmax);

    const std::size_t test_offset = static_cast<std::size_t>(hours_between(train.start(), test.start()));
    ErrorAccumulator acc;
    double prediction_time = 0.0;
    for (std::size_t w = 0; w + static_cast<std::size_t>(horizon) <= test.size();
         w += static_cast<std::size_t>(horizon)) {
        WindowForecast window;
        window.window_start = test.stamp_at(w);

        const std::size_t context_len = test_offset + w;
        const HourlyCountSeries context = context_all.slice(0, context_len);
        result.context_audit.emplace_back(hour_index(context.end()),
                                          hour_index(window.window_start));

        std::vector<double> context_tmax;
        if (have_tmax)
            context_tmax.assign(tmax_all.begin(),
                                tmax_all.begin() + static_cast<std::ptrdiff_t>(context_len));
        ForecastInput input{context, have_tmax ? &context_tmax : nullptr};

        const auto t_pred = Clock::now();
        try {
            const ForecastResult fc = model.forecast(input, horizon);
            prediction_time += seconds_since(t_pred);
            window.forecast = fc.point;
        } catch (const ContextError& e) {
            prediction_time += seconds_since(t_pred);
            window.skipped = true;
            window.skip_reason = e.what();
            ++result.row.skipped_windows;
            result.windows.push_back(std::move(window));
            continue;
        }

        window.observed.resize(static_cast<std::size_t>(horizon));
        window.observed_valid.resize(static_cast<std::size_t>(horizon));
        for (int j = 0; j < horizon; ++j) {
            const std::size_t k = w + static_cast<std::size_t>(j);
            window.observed[static_cast<std::size_t>(j)] = static_cast<double>(test.count_at(k));
            window.observed_valid[static_cast<std::size_t>(j)] = test.valid_at(k) ? 1 : 0;
            if (test.valid_at(k))
                acc.add(window.forecast[static_cast<std::size_t>(j)], window.observed[static_cast<std::size_t>(j)]);
        }
        result.windows.push_back(std::move(window));
        ++result.row.windows;
    }

    result.row.prediction_time_s = prediction_time;
    result.row.mae = acc.mae();
    result.row.mse = acc.mse();
    result.row.scored_hours = acc.n();
    return result;
}

ModelSummary model_summary(const std::string& name) {
    if (name == "naive") return {"Hourly Arrivals", "7 days", "7 days", true};
    if (name == "rvar") return {"Hourly Arrivals", "14 days", "7 days", true};
    if (name == "tvlinear") return {"Hourly Arrivals", "7 days", "7 days", true};
    if (name == "tbats") return {"Hourly Arrivals", "Whole history", "Test span", false};
    if (name == "lstm3") return {"Hourly Arrivals", "7 days", "3 days", false};
    if (name == "lstm3w") return {"Hourly Arrivals, Maximum Temperature", "7 days", "3 days", false};
    if (name == "lstm7") return {"Hourly Arrivals", "7 days", "7 days", false};
    if (name == "lstm7w") return {"Hourly Arrivals, Maximum Temperature", "7 days", "7 days", false};
    return {"", "", "", false};
}

}  // namespace hourcast
