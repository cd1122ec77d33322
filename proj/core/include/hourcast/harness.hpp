#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hourcast/forecaster.hpp"

namespace hourcast {

/// One evaluated forecast window together with the observations it was
/// scored against.
struct WindowForecast {
    HourStamp window_start;
    std::vector<double> forecast;
    std::vector<double> observed;
    std::vector<std::uint8_t> observed_valid;
    bool skipped = false;
    std::string skip_reason;
};

struct MetricsRow {
    std::string model;
    double mse = 0.0;
    double mae = 0.0;
    double training_time_s = 0.0;
    double prediction_time_s = 0.0;
    bool has_training_time = true;  // persistence has nothing to fit
    std::size_t scored_hours = 0;
    std::size_t windows = 0;
    std::size_t skipped_windows = 0;
    bool failed = false;
    std::string error;
};

struct EvalResult {
    std::vector<WindowForecast> windows;
    MetricsRow row;
    /// (context end, window start) hour indices per forecast call; the
    /// harness never lets a model see past its window's origin.
    std::vector<std::pair<std::int64_t, std::int64_t>> context_audit;
};

/// Fits the model on train (timed) and rolls non-overlapping windows of the
/// model's horizon across the test span (stride = horizon). Every call gets
/// the true observed history up to the window start - train, the masked gap
/// and previously scored test weeks - never the model's own forecasts.
/// Models declaring kFullSpan get one window covering the whole test span.
/// Masked test hours never contribute to the metrics.
EvalResult rolling_evaluate(Forecaster& model, const HourlyCountSeries& train,
                            const HourlyCountSeries& test,
                            const std::vector<double>* train_tmax = nullptr,
                            const std::vector<double>* test_tmax = nullptr);

/// Static per-model description for the summary table.
struct ModelSummary {
    std::string features;
    std::string input_horizon;
    std::string forecast_horizon;
    bool explainable = false;
};
ModelSummary model_summary(const std::string& name);

/// Provenance stamped into the report.
struct ReportMeta {
    std::string config_hash;
    std::string data_fingerprint;
    std::uint64_t seed = 0;
    bool include_timing = true;  // off: timing cells render NA, enabling
                                 // byte-identical reports across runs
};

/// FNV-1a over the series contents, hex-encoded.
std::string data_fingerprint(const HourlyCountSeries& series);
std::string content_hash(const std::string& bytes);

/// Markdown report: a metrics table in the familiar four-metric layout plus
/// a model summary table (features, horizons, explainability).
std::string render_report(const std::vector<MetricsRow>& rows, const ReportMeta& meta);

/// Machine-readable twin of the metrics table; values round-trip exactly.
std::string render_report_csv(const std::vector<MetricsRow>& rows, const ReportMeta& meta);

/// Long-format, plot-ready: one row per forecast hour per model. Masked
/// observations leave the observed field empty.
std::string render_forecasts_csv(
    const std::vector<std::pair<std::string, std::vector<WindowForecast>>>& per_model);

std::vector<MetricsRow> parse_report_csv(const std::string& text);

}  // namespace hourcast
