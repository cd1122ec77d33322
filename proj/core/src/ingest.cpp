#include "hourcast/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace hourcast {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (true) {
        const auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(pos));
            break;
        }
        fields.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return fields;
}

bool parse_int_field(std::string_view s, int& out) {
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [p, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && p == last;
}

// YYYY-MM-DD HH:MM (T separator also accepted); minutes may be nonzero.
bool parse_minute_stamp(std::string_view s, HourStamp& hour, int& minute) {
    if (s.size() != 16) return false;
    if (s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') return false;
    HourStamp ts;
    if (!parse_int_field(s.substr(0, 4), ts.year) || !parse_int_field(s.substr(5, 2), ts.month) ||
        !parse_int_field(s.substr(8, 2), ts.day) || !parse_int_field(s.substr(11, 2), ts.hour) ||
        !parse_int_field(s.substr(14, 2), minute))
        return false;
    if (minute < 0 || minute > 59 || !is_valid(ts)) return false;
    hour = ts;
    return true;
}

std::string trim_cr(std::string line) {
    if (line.ends_with('\r')) line.pop_back();
    return line;
}

}  // namespace

void SplitSpec::validate() const {
    if (!(train_start < train_end)) throw std::invalid_argument("SplitSpec: empty train range");
    if (!(test_start < test_end)) throw std::invalid_argument("SplitSpec: empty test range");
    if (test_start < train_end)
        throw std::invalid_argument("SplitSpec: train range must precede test range");
    for (const auto& r : exclusions)
        if (!(r.begin < r.end)) throw std::invalid_argument("SplitSpec: ill-ordered exclusion");
}

SplitSpec SplitSpec::rambam_default() {
    SplitSpec spec;
    spec.train_start = {2004, 1, 1, 0};
    spec.train_end = {2006, 1, 1, 0};
    spec.test_start = {2007, 1, 1, 0};
    spec.test_end = {2007, 11, 1, 0};
    spec.exclusions = {{{2006, 1, 1, 0}, {2007, 1, 1, 0}}};
    return spec;
}

std::vector<ArrivalEvent> parse_arrival_events(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    line = trim_cr(std::move(line));
    if (line != "patient_id,arrival_time,department")
        throw ParseError(path, 1, "expected header 'patient_id,arrival_time,department'");

    std::vector<ArrivalEvent> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(std::move(line));
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 3) throw ParseError(path, line_no, "expected 3 columns");
        ArrivalEvent ev;
        if (!parse_minute_stamp(fields[1], ev.hour, ev.minute))
            throw ParseError(path, line_no, "malformed timestamp '" + std::string(fields[1]) + "'");
        ev.department = std::string(fields[2]);
        events.push_back(std::move(ev));
    }
    std::stable_sort(events.begin(), events.end(), [](const ArrivalEvent& a, const ArrivalEvent& b) {
        if (a.hour != b.hour) return a.hour < b.hour;
        return a.minute < b.minute;
    });
    return events;
}

WeatherSeries read_weather_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    line = trim_cr(std::move(line));
    if (line != "timestamp,tmax_c") throw ParseError(path, 1, "expected header 'timestamp,tmax_c'");

    WeatherSeries ws;
    std::size_t line_no = 1;
    bool have_start = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim_cr(std::move(line));
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError(path, line_no, "expected 2 columns");
        const auto ts = parse_hour(std::string_view(line).substr(0, comma));
        if (!ts) throw ParseError(path, line_no, "malformed timestamp");
        double value = 0.0;
        {
            const char* first = line.data() + comma + 1;
            const char* last = line.data() + line.size();
            auto [p, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || p != last || !std::isfinite(value))
                throw ParseError(path, line_no, "malformed temperature");
        }
        if (!have_start) {
            ws.start = *ts;
            have_start = true;
            ws.tmax.push_back(value);
            continue;
        }
        const std::int64_t offset = hours_between(ws.start, *ts);
        if (offset < static_cast<std::int64_t>(ws.tmax.size()))
            throw ParseError(path, line_no, "timestamps out of order");
        // forward-fill interior gaps with the last reading
        while (static_cast<std::int64_t>(ws.tmax.size()) < offset) ws.tmax.push_back(ws.tmax.back());
        ws.tmax.push_back(value);
    }
    if (ws.tmax.empty()) throw ParseError(path, 0, "no data rows");
    return ws;
}

HourlyCountSeries aggregate_hourly(std::span<const ArrivalEvent> events, const HourRange& window) {
    const std::int64_t n_hours = hours_between(window.begin, window.end);
    if (n_hours < 0) throw std::invalid_argument("aggregate_hourly: window end before start");
    std::vector<int> counts(static_cast<std::size_t>(n_hours), 0);
    for (const auto& ev : events) {
        const std::int64_t k = hours_between(window.begin, ev.hour);
        if (k < 0 || k >= n_hours) continue;  // half-open window: end hour drops out
        ++counts[static_cast<std::size_t>(k)];
    }
    return {window.begin, std::move(counts)};
}

HourlyCountSeries apply_exclusions(HourlyCountSeries series, const SplitSpec& spec) {
    for (const auto& r : spec.exclusions) {
        std::int64_t lo = hours_between(series.start(), r.begin);
        std::int64_t hi = hours_between(series.start(), r.end);
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(series.size()));
        for (std::int64_t k = lo; k < hi; ++k) series.set_valid(static_cast<std::size_t>(k), false);
    }
    return series;
}

namespace {

// Slice [from, to) out of the series, clipped to its span and trimmed
// forward so the result starts on a Monday 00:00.
HourlyCountSeries monday_aligned_slice(const HourlyCountSeries& series, const HourStamp& from,
                                       const HourStamp& to) {
    std::int64_t lo = std::max<std::int64_t>(hours_between(series.start(), from), 0);
    const std::int64_t hi =
        std::min<std::int64_t>(hours_between(series.start(), to), static_cast<std::int64_t>(series.size()));
    if (lo >= hi) return {};
    const int how = hour_of_week(series.stamp_at(static_cast<std::size_t>(lo)));
    if (how != 0) lo += kHoursPerWeek - how;
    if (lo >= hi) return {};
    return series.slice(static_cast<std::size_t>(lo), static_cast<std::size_t>(hi - lo));
}

}  // namespace

TrainTestSplit split(const HourlyCountSeries& series, const SplitSpec& spec) {
    spec.validate();
    TrainTestSplit out;
    out.train = monday_aligned_slice(series, spec.train_start, spec.train_end);
    out.test = monday_aligned_slice(series, spec.test_start, spec.test_end);
    if (out.train.empty()) throw std::invalid_argument("split: training range yields no data");
    out.test_empty = out.test.empty();
    return out;
}

std::vector<double> join_weather(const HourlyCountSeries& series, const WeatherSeries& weather) {
    if (weather.tmax.empty()) throw std::invalid_argument("join_weather: empty weather series");
    if (series.start() < weather.start)
        throw std::invalid_argument("join_weather: weather starts after the series (" +
                                    to_string(weather.start) + " > " + to_string(series.start()) + ")");
    std::vector<double> out(series.size());
    const std::int64_t base = hours_between(weather.start, series.start());
    for (std::size_t k = 0; k < series.size(); ++k) {
        const std::int64_t w = base + static_cast<std::int64_t>(k);
        // trailing hours beyond the last reading are forward-filled
        const std::size_t idx =
            std::min(static_cast<std::size_t>(w), weather.tmax.size() - 1);
        out[k] = weather.tmax[idx];
    }
    return out;
}

}  // namespace hourcast
