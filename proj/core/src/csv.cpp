#include "hourcast/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace hourcast {

namespace {

std::string location(const std::string& path, std::size_t line) {
    std::ostringstream os;
    os << path;
    if (line > 0) os << ":" << line;
    return os.str();
}

}  // namespace

ParseError::ParseError(std::string path, std::size_t line, const std::string& what)
    : std::runtime_error(location(path, line) + ": " + what), path_(std::move(path)), line_(line) {}

void write_hourly_csv(const std::string& path, const HourlyCountSeries& series) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, 0, "cannot open for writing");
    out << "timestamp,count,valid\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        out << to_string(series.stamp_at(k)) << ',' << series.count_at(k) << ','
            << (series.valid_at(k) ? 1 : 0) << '\n';
    }
    if (!out) throw ParseError(path, 0, "write failed");
}

HourlyCountSeries read_hourly_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    if (line.ends_with('\r')) line.pop_back();
    if (line != "timestamp,count,valid")
        throw ParseError(path, 1, "expected header 'timestamp,count,valid'");

    HourStamp start{};
    std::vector<int> counts;
    std::vector<std::uint8_t> valid;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.ends_with('\r')) line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw ParseError(path, line_no, "expected 3 columns");
        const auto ts = parse_hour(std::string_view(line).substr(0, c1));
        if (!ts) throw ParseError(path, line_no, "malformed timestamp");
        int count = 0;
        {
            const char* first = line.data() + c1 + 1;
            const char* last = line.data() + c2;
            auto [p, ec] = std::from_chars(first, last, count);
            if (ec != std::errc() || p != last || count < 0)
                throw ParseError(path, line_no, "malformed count");
        }
        const std::string_view v = std::string_view(line).substr(c2 + 1);
        if (v != "0" && v != "1") throw ParseError(path, line_no, "valid flag must be 0 or 1");

        if (counts.empty()) {
            start = *ts;
        } else if (hours_between(start, *ts) != static_cast<std::int64_t>(counts.size())) {
            throw ParseError(path, line_no, "series has a gap or is out of order");
        }
        counts.push_back(count);
        valid.push_back(v == "1" ? 1 : 0);
    }
    if (counts.empty()) throw ParseError(path, 0, "no data rows");
    return {start, std::move(counts), std::move(valid)};
}

}  // namespace hourcast
