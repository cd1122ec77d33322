#pragma once

#include <stdexcept>
#include <string>

#include "hourcast/series.hpp"

namespace hourcast {

/// Parse/IO failure carrying the offending file and 1-based line number
/// (0 when the problem is not tied to a line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what);
    const std::string& path() const { return path_; }
    std::size_t line() const { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Hourly series CSV: header "timestamp,count,valid", one gap-free row per
/// hour, timestamps formatted YYYY-MM-DDTHH:00, valid in {0,1}.
void write_hourly_csv(const std::string& path, const HourlyCountSeries& series);
HourlyCountSeries read_hourly_csv(const std::string& path);

}  // namespace hourcast
