#include "hourcast/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace hourcast {

namespace {

using nlohmann::json;

HourStamp parse_stamp_or_throw(const std::string& text, const std::string& what) {
    const auto ts = parse_point(text);
    if (!ts) throw ConfigError(what + ": cannot parse timestamp '" + text + "'");
    return *ts;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
}

}  // namespace

const std::vector<std::string>& registered_models() {
    static const std::vector<std::string> names{"naive",  "rvar",   "tvlinear", "tbats",
                                                "lstm3",  "lstm7",  "lstm3w",   "lstm7w"};
    return names;
}

SplitSpec RunConfig::resolved_split(const HourStamp& series_start) const {
    if (train_weeks || test_weeks) {
        if (!train_weeks || !test_weeks)
            throw ConfigError("split: train_weeks and test_weeks must be given together");
        if (*train_weeks < 1 || *test_weeks < 1)
            throw ConfigError("split: week counts must be positive");
        SplitSpec spec;
        spec.train_start = series_start;
        spec.train_end = add_hours(series_start, static_cast<std::int64_t>(*train_weeks) * kHoursPerWeek);
        spec.test_start = spec.train_end;
        spec.test_end =
            add_hours(spec.test_start, static_cast<std::int64_t>(*test_weeks) * kHoursPerWeek);
        return spec;
    }
    return split;
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig cfg;
    cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
    cfg.out_dir = get_or<std::string>(j, "out_dir", cfg.out_dir);

    if (j.contains("models")) {
        cfg.models = get_or<std::vector<std::string>>(j, "models", cfg.models);
        for (const auto& m : cfg.models) {
            const auto& known = registered_models();
            if (std::find(known.begin(), known.end(), m) == known.end())
                throw ConfigError("unknown model name '" + m + "'");
        }
        if (cfg.models.empty()) throw ConfigError("models: list is empty");
    }

    if (j.contains("data")) {
        const json& d = j.at("data");
        const std::string source = get_or<std::string>(d, "source", "synth");
        if (source == "synth")
            cfg.source = DataSource::kSynth;
        else if (source == "hourly_csv")
            cfg.source = DataSource::kHourlyCsv;
        else if (source == "events_csv")
            cfg.source = DataSource::kEventsCsv;
        else
            throw ConfigError("data.source must be synth, hourly_csv or events_csv");
        cfg.data_path = get_or<std::string>(d, "path", "");
        cfg.weather_path = get_or<std::string>(d, "weather", "");
        if (cfg.source != DataSource::kSynth && cfg.data_path.empty())
            throw ConfigError("data.path is required for csv sources");
        cfg.synth_weeks = get_or<int>(d, "weeks", cfg.synth_weeks);
        cfg.synth_seed = get_or<std::uint64_t>(d, "seed", cfg.synth_seed);
        if (d.contains("start"))
            cfg.synth_start = parse_stamp_or_throw(d.at("start").get<std::string>(), "data.start");
        if (d.contains("profile")) {
            const json& p = d.at("profile");
            cfg.profile.base = get_or<double>(p, "base", cfg.profile.base);
            cfg.profile.morning_amp = get_or<double>(p, "morning_amp", cfg.profile.morning_amp);
            cfg.profile.evening_amp = get_or<double>(p, "evening_amp", cfg.profile.evening_amp);
            cfg.profile.weekend_factor =
                get_or<double>(p, "weekend_factor", cfg.profile.weekend_factor);
            cfg.profile.shabbat_factor =
                get_or<double>(p, "shabbat_factor", cfg.profile.shabbat_factor);
        }
    }

    if (j.contains("split")) {
        const json& s = j.at("split");
        if (s.contains("train_weeks") || s.contains("test_weeks")) {
            cfg.train_weeks = get_or<int>(s, "train_weeks", 0);
            cfg.test_weeks = get_or<int>(s, "test_weeks", 0);
        } else {
            SplitSpec spec;
            spec.train_start =
                parse_stamp_or_throw(s.at("train_start").get<std::string>(), "split.train_start");
            spec.train_end =
                parse_stamp_or_throw(s.at("train_end").get<std::string>(), "split.train_end");
            spec.test_start =
                parse_stamp_or_throw(s.at("test_start").get<std::string>(), "split.test_start");
            spec.test_end = parse_stamp_or_throw(s.at("test_end").get<std::string>(), "split.test_end");
            if (s.contains("exclusions")) {
                for (const auto& e : s.at("exclusions")) {
                    if (!e.is_array() || e.size() != 2)
                        throw ConfigError("split.exclusions entries must be [start, end] pairs");
                    spec.exclusions.push_back(
                        {parse_stamp_or_throw(e.at(0).get<std::string>(), "exclusion"),
                         parse_stamp_or_throw(e.at(1).get<std::string>(), "exclusion")});
                }
            }
            try {
                spec.validate();
            } catch (const std::exception& e) {
                throw ConfigError(std::string("split: ") + e.what());
            }
            cfg.split = spec;
        }
    }

    if (j.contains("report")) {
        const std::string timing = get_or<std::string>(j.at("report"), "timing", "wall");
        if (timing == "wall")
            cfg.report_timing = true;
        else if (timing == "none")
            cfg.report_timing = false;
        else
            throw ConfigError("report.timing must be 'wall' or 'none'");
    }

    bool rvar_seed_set = false, lstm_seed_set = false;
    if (j.contains("rvar")) {
        const json& r = j.at("rvar");
        cfg.rvar.rank = get_or<int>(r, "rank", cfg.rvar.rank);
        cfg.rvar.lag_order = get_or<int>(r, "lag_order", cfg.rvar.lag_order);
        cfg.rvar.max_iters = get_or<int>(r, "max_iters", cfg.rvar.max_iters);
        cfg.rvar.tol = get_or<double>(r, "tol", cfg.rvar.tol);
        if (r.contains("seed")) {
            cfg.rvar.seed = r.at("seed").get<std::uint64_t>();
            rvar_seed_set = true;
        }
    }
    if (j.contains("tvlinear")) {
        const json& k = j.at("tvlinear");
        auto& grid = cfg.kalman.grid;
        grid.alpha = get_or<std::vector<double>>(k, "alpha_grid", grid.alpha);
        grid.sigma = get_or<std::vector<double>>(k, "sigma_grid", grid.sigma);
        grid.q_scale = get_or<std::vector<double>>(k, "q_grid", grid.q_scale);
        grid.tie_q_to_sigma = get_or<bool>(k, "tie_q_to_sigma", grid.tie_q_to_sigma);
        grid.prior_scale = get_or<double>(k, "prior_scale", grid.prior_scale);
    }
    if (j.contains("tbats")) {
        const json& t = j.at("tbats");
        cfg.tbats.omega_grid = get_or<std::vector<double>>(t, "omega_grid", cfg.tbats.omega_grid);
        cfg.tbats.periods = get_or<std::vector<int>>(t, "periods", cfg.tbats.periods);
        cfg.tbats.harmonics = get_or<std::vector<int>>(t, "harmonics", cfg.tbats.harmonics);
        cfg.tbats.arma_p = get_or<int>(t, "arma_p", cfg.tbats.arma_p);
        cfg.tbats.arma_q = get_or<int>(t, "arma_q", cfg.tbats.arma_q);
        cfg.tbats.phi = get_or<double>(t, "phi", cfg.tbats.phi);
        cfg.tbats.max_opt_evals = get_or<int>(t, "max_opt_iters", cfg.tbats.max_opt_evals);
        try {
            cfg.tbats.validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("tbats: ") + e.what());
        }
    }
    if (j.contains("lstm")) {
        const json& l = j.at("lstm");
        cfg.lstm.hidden_dim = get_or<int>(l, "hidden_dim", cfg.lstm.hidden_dim);
        cfg.lstm.learning_rate = get_or<double>(l, "learning_rate", cfg.lstm.learning_rate);
        cfg.lstm.epochs = get_or<int>(l, "epochs", cfg.lstm.epochs);
        cfg.lstm.batch_size = get_or<int>(l, "batch_size", cfg.lstm.batch_size);
        cfg.lstm.stride = get_or<int>(l, "stride", cfg.lstm.stride);
        cfg.lstm.momentum = get_or<double>(l, "momentum", cfg.lstm.momentum);
        if (l.contains("seed")) {
            cfg.lstm.seed = l.at("seed").get<std::uint64_t>();
            lstm_seed_set = true;
        }
    }

    if (!rvar_seed_set) cfg.rvar.seed = cfg.seed;
    if (!lstm_seed_set) cfg.lstm.seed = cfg.seed;
    return cfg;
}

void apply_global_seed(RunConfig& cfg, std::uint64_t seed) {
    cfg.seed = seed;
    cfg.rvar.seed = seed;
    cfg.lstm.seed = seed;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    LoadedConfig loaded;
    loaded.raw_text = buffer.str();
    loaded.config = parse_config(loaded.raw_text);
    return loaded;
}

}  // namespace hourcast
