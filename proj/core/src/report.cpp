#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hourcast/harness.hpp"

namespace hourcast {

namespace {

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string timing_cell(const MetricsRow& row, double value, bool available, bool include) {
    if (row.failed || !available || !include) return "NA";
    return fixed2(value);
}

std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
    return buf;
}

}  // namespace

std::string data_fingerprint(const HourlyCountSeries& series) {
    std::uint64_t h = 1469598103934665603ull;
    const auto start = series.start();
    h = fnv1a(&start, sizeof start, h);
    h = fnv1a(series.counts().data(), series.counts().size() * sizeof(int), h);
    h = fnv1a(series.valid().data(), series.valid().size(), h);
    return hex64(h);
}

std::string content_hash(const std::string& bytes) {
    return hex64(fnv1a(bytes.data(), bytes.size(), 1469598103934665603ull));
}

std::string render_report(const std::vector<MetricsRow>& rows, const ReportMeta& meta) {
    if (rows.empty()) throw std::invalid_argument("render_report: no rows");
    std::ostringstream os;
    os << "# Forecasting results\n\n";
    os << "Timings are wall clock and machine dependent.\n\n";
    os << "| Model | MSE | MAE | Training Time [s] | Prediction Time [s] |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        if (r.failed) {
            os << "| " << r.model << " | failed | failed | NA | NA |\n";
            continue;
        }
        os << "| " << r.model << " | " << fixed2(r.mse) << " | " << fixed2(r.mae) << " | "
           << timing_cell(r, r.training_time_s, r.has_training_time, meta.include_timing) << " | "
           << timing_cell(r, r.prediction_time_s, true, meta.include_timing) << " |\n";
    }
    os << "\n## Models\n\n";
    os << "| Model | Features | Input horizon | Forecast Horizon | Explainable |\n";
    os << "|---|---|---|---|---|\n";
    for (const auto& r : rows) {
        const ModelSummary s = model_summary(r.model);
        os << "| " << r.model << " | " << s.features << " | " << s.input_horizon << " | "
           << s.forecast_horizon << " | " << (s.explainable ? "Yes" : "No") << " |\n";
    }
    os << "\nconfig_hash=" << meta.config_hash << " data_fingerprint=" << meta.data_fingerprint
       << " seed=" << meta.seed << "\n";
    for (const auto& r : rows)
        if (r.failed) os << "\nmodel " << r.model << " failed: " << r.error << "\n";
    return os.str();
}

std::string render_report_csv(const std::vector<MetricsRow>& rows, const ReportMeta& meta) {
    if (rows.empty()) throw std::invalid_argument("render_report_csv: no rows");
    std::ostringstream os;
    os << "model,mse,mae,training_time_s,prediction_time_s,scored_hours,windows,status,"
          "config_hash,data_fingerprint,seed\n";
    for (const auto& r : rows) {
        os << r.model << ',';
        if (r.failed) {
            os << ",,NA,NA,0,0,failed";
        } else {
            os << full_precision(r.mse) << ',' << full_precision(r.mae) << ','
               << timing_cell(r, r.training_time_s, r.has_training_time, meta.include_timing) << ','
               << timing_cell(r, r.prediction_time_s, true, meta.include_timing) << ','
               << r.scored_hours << ',' << r.windows << ",ok";
        }
        os << ',' << meta.config_hash << ',' << meta.data_fingerprint << ',' << meta.seed << '\n';
    }
    return os.str();
}

std::string render_forecasts_csv(
    const std::vector<std::pair<std::string, std::vector<WindowForecast>>>& per_model) {
    std::ostringstream os;
    os << "model,timestamp,observed,forecast\n";
    for (const auto& [model, windows] : per_model) {
        for (const auto& w : windows) {
            if (w.skipped) continue;
            for (std::size_t j = 0; j < w.forecast.size(); ++j) {
                os << model << ',' << to_string(add_hours(w.window_start, static_cast<std::int64_t>(j)))
                   << ',';
                if (j < w.observed_valid.size() && w.observed_valid[j])
                    os << full_precision(w.observed[j]);
                os << ',' << full_precision(w.forecast[j]) << '\n';
            }
        }
    }
    return os.str();
}

std::vector<MetricsRow> parse_report_csv(const std::string& text) {
    std::vector<MetricsRow> rows;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (fields.size() < 8) throw std::invalid_argument("parse_report_csv: malformed row");
        MetricsRow r;
        r.model = fields[0];
        r.failed = fields[7] == "failed";
        auto num = [](const std::string& s) {
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || p != s.data() + s.size())
                throw std::invalid_argument("parse_report_csv: bad number '" + s + "'");
            return v;
        };
        if (!r.failed) {
            r.mse = num(fields[1]);
            r.mae = num(fields[2]);
            r.has_training_time = fields[3] != "NA";
            if (r.has_training_time) r.training_time_s = num(fields[3]);
            if (fields[4] != "NA") r.prediction_time_s = num(fields[4]);
            r.scored_hours = static_cast<std::size_t>(num(fields[5]));
            r.windows = static_cast<std::size_t>(num(fields[6]));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace hourcast
