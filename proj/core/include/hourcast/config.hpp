#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hourcast/ingest.hpp"
#include "hourcast/kalman.hpp"
#include "hourcast/lstm.hpp"
#include "hourcast/rvar.hpp"
#include "hourcast/synth.hpp"
#include "hourcast/tbats.hpp"

namespace hourcast {

/// Bad or inconsistent configuration; the CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DataSource { kSynth, kHourlyCsv, kEventsCsv };

/// Everything a run needs, deserialized from one JSON config file. Every
/// knob the models leave open is pinned here so runs are reproducible from
/// (config, data, seed).
struct RunConfig {
    DataSource source = DataSource::kSynth;
    std::string data_path;
    std::string weather_path;  // optional

    // synth source
    ProfileParams profile;
    int synth_weeks = 124;
    HourStamp synth_start = kDefaultSynthStart;
    std::uint64_t synth_seed = 42;

    SplitSpec split = SplitSpec::rambam_default();
    std::optional<int> train_weeks;  // week-based split relative to the
    std::optional<int> test_weeks;   // series start; overrides dates

    std::vector<std::string> models = {"naive"};

    RvarOptions rvar;
    KalmanOptions kalman;
    TbatsConfig tbats;
    LstmTrainConfig lstm;

    std::uint64_t seed = 1;
    std::string out_dir = ".";
    bool report_timing = true;

    /// Date-based or week-based split resolved against the actual series.
    SplitSpec resolved_split(const HourStamp& series_start) const;
};

/// Parses the JSON config file. Unknown model names and malformed values
/// raise ConfigError. The returned raw text feeds the report's config hash.
struct LoadedConfig {
    RunConfig config;
    std::string raw_text;
};
LoadedConfig load_config(const std::string& path);

RunConfig parse_config(const std::string& json_text);

const std::vector<std::string>& registered_models();

/// Seed propagation: the global seed reaches every model section that did
/// not pin its own.
void apply_global_seed(RunConfig& cfg, std::uint64_t seed);

}  // namespace hourcast
