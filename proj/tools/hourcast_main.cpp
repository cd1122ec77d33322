// hourcast command line: data ingestion, synthetic generation, model
// training and the rolling evaluation harness, all driven by one JSON
// config. Exit codes: 0 success, 1 model failure, 2 usage/config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hourcast/config.hpp"
#include "hourcast/csv.hpp"
#include "hourcast/harness.hpp"
#include "hourcast/naive.hpp"
#include "hourcast/registry.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitModelFailure = 1;
constexpr int kExitUsage = 2;

struct Dataset {
    hourcast::HourlyCountSeries series;  // full span, exclusions applied
    std::optional<std::vector<double>> tmax;
};

struct CommonArgs {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
};

// a zero base rate short-circuits to an all-zero profile (build_profile
// itself requires base > 0)
hourcast::WeeklyIntensityProfile profile_from(const hourcast::ProfileParams& p) {
    if (p.base == 0.0) return {};
    return hourcast::build_profile(p);
}

hourcast::LoadedConfig load_with_overrides(const CommonArgs& args) {
    hourcast::LoadedConfig loaded;
    if (!args.config_path.empty()) {
        loaded = hourcast::load_config(args.config_path);
    } else {
        loaded.raw_text = "{}";
        loaded.config = hourcast::parse_config(loaded.raw_text);
    }
    if (args.seed) hourcast::apply_global_seed(loaded.config, *args.seed);
    if (args.out_dir) loaded.config.out_dir = *args.out_dir;
    return loaded;
}

Dataset build_dataset(const hourcast::RunConfig& cfg) {
    Dataset data;
    switch (cfg.source) {
        case hourcast::DataSource::kSynth: {
            const auto profile = profile_from(cfg.profile);
            data.series =
                hourcast::simulate(profile, cfg.synth_weeks, cfg.synth_seed, cfg.synth_start);
            break;
        }
        case hourcast::DataSource::kHourlyCsv:
            data.series = hourcast::read_hourly_csv(cfg.data_path);
            break;
        case hourcast::DataSource::kEventsCsv: {
            const auto events = hourcast::parse_arrival_events(cfg.data_path);
            if (events.empty()) throw hourcast::ConfigError("events file has no rows");
            const auto split = cfg.resolved_split(events.front().hour);
            data.series = hourcast::aggregate_hourly(events, {split.train_start, split.test_end});
            break;
        }
    }
    data.series = hourcast::apply_exclusions(std::move(data.series),
                                             cfg.resolved_split(data.series.start()));
    if (!cfg.weather_path.empty()) {
        const auto weather = hourcast::read_weather_csv(cfg.weather_path);
        data.tmax = hourcast::join_weather(data.series, weather);
    }
    return data;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

struct SplitData {
    hourcast::TrainTestSplit parts;
    std::optional<std::vector<double>> train_tmax, test_tmax;
};

SplitData split_dataset(const Dataset& data, const hourcast::RunConfig& cfg) {
    SplitData sd;
    const auto spec = cfg.resolved_split(data.series.start());
    sd.parts = hourcast::split(data.series, spec);
    if (data.tmax) {
        const auto slice_tmax = [&](const hourcast::HourlyCountSeries& part) {
            const auto offset = hourcast::hours_between(data.series.start(), part.start());
            return std::vector<double>(data.tmax->begin() + offset,
                                       data.tmax->begin() + offset +
                                           static_cast<std::ptrdiff_t>(part.size()));
        };
        sd.train_tmax = slice_tmax(sd.parts.train);
        if (!sd.parts.test.empty()) sd.test_tmax = slice_tmax(sd.parts.test);
    }
    return sd;
}

int run_compare(const hourcast::LoadedConfig& loaded, const std::vector<std::string>& models) {
    const auto& cfg = loaded.config;
    const Dataset data = build_dataset(cfg);
    const SplitData sd = split_dataset(data, cfg);
    if (sd.parts.test.empty()) throw hourcast::ConfigError("split yields an empty test span");

    hourcast::ReportMeta meta;
    meta.config_hash = hourcast::content_hash(loaded.raw_text);
    meta.data_fingerprint = hourcast::data_fingerprint(data.series);
    meta.seed = cfg.seed;
    meta.include_timing = cfg.report_timing;

    std::vector<hourcast::MetricsRow> rows;
    std::vector<std::pair<std::string, std::vector<hourcast::WindowForecast>>> all_windows;
    std::size_t failures = 0;
    for (const auto& name : models) {
        try {
            auto model = hourcast::make_forecaster(name, cfg);
            auto result = hourcast::rolling_evaluate(
                *model, sd.parts.train, sd.parts.test,
                sd.train_tmax ? &*sd.train_tmax : nullptr, sd.test_tmax ? &*sd.test_tmax : nullptr);
            rows.push_back(result.row);
            all_windows.emplace_back(name, std::move(result.windows));
        } catch (const hourcast::ConfigError&) {
            throw;  // configuration problems abort the whole run
        } catch (const std::exception& e) {
            hourcast::MetricsRow row;
            row.model = name;
            row.failed = true;
            row.error = e.what();
            rows.push_back(std::move(row));
            ++failures;
            std::cerr << "model " << name << " failed: " << e.what() << "\n";
        }
    }

    fs::create_directories(cfg.out_dir);
    write_file(fs::path(cfg.out_dir) / "report.md", hourcast::render_report(rows, meta));
    write_file(fs::path(cfg.out_dir) / "report.csv", hourcast::render_report_csv(rows, meta));
    write_file(fs::path(cfg.out_dir) / "forecasts.csv",
               hourcast::render_forecasts_csv(all_windows));
    std::cout << hourcast::render_report(rows, meta);
    return failures == models.size() ? kExitModelFailure : kExitOk;
}

json state_to_json(const hourcast::StateEstimate& state) {
    json mu = json::array();
    for (Eigen::Index i = 0; i < state.mu.size(); ++i) mu.push_back(state.mu[i]);
    json v = json::array();
    for (Eigen::Index i = 0; i < state.v.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < state.v.cols(); ++j) row.push_back(state.v(i, j));
        v.push_back(std::move(row));
    }
    return json{{"mu", std::move(mu)}, {"v", std::move(v)}};
}

int run_train(const hourcast::LoadedConfig& loaded, const std::string& name) {
    const auto& cfg = loaded.config;
    const Dataset data = build_dataset(cfg);
    const SplitData sd = split_dataset(data, cfg);
    fs::create_directories(cfg.out_dir);
    const fs::path out_dir(cfg.out_dir);

    auto model = hourcast::make_forecaster(name, cfg);
    model->fit(sd.parts.train, sd.train_tmax ? &*sd.train_tmax : nullptr);

    if (auto* lstm = dynamic_cast<hourcast::LstmForecaster*>(model.get())) {
        const auto path = out_dir / (name + "_weights.txt");
        hourcast::save_weights(path.string(), lstm->trained().weights, lstm->trained().scaling);
        std::cout << "wrote " << path.string() << "\n";
    } else if (auto* kalman = dynamic_cast<hourcast::KalmanForecaster*>(model.get())) {
        const auto& hp = kalman->hyper_params();
        json artifact;
        artifact["model"] = name;
        artifact["alpha"] = hp.alpha[0];
        artifact["sigma"] = hp.sigma;
        artifact["q_scale"] = hp.q_scale;
        artifact["state"] = state_to_json(kalman->state());
        const auto path = out_dir / (name + "_fit.json");
        write_file(path, artifact.dump(2) + "\n");
        std::cout << "wrote " << path.string() << "\n";
    } else if (auto* rvar = dynamic_cast<hourcast::RvarForecaster*>(model.get())) {
        const auto& m = rvar->model();
        json artifact;
        artifact["model"] = name;
        artifact["rank"] = m.rank;
        artifact["lag_order"] = m.lag_order;
        artifact["final_objective"] =
            m.objective_trace.empty() ? 0.0 : m.objective_trace.back();
        artifact["iterations"] = m.objective_trace.size();
        const auto path = out_dir / (name + "_fit.json");
        write_file(path, artifact.dump(2) + "\n");
        std::cout << "wrote " << path.string() << "\n";
    } else if (auto* tbats = dynamic_cast<hourcast::TbatsForecaster*>(model.get())) {
        const auto& p = tbats->params();
        json artifact;
        artifact["model"] = name;
        artifact["omega"] = p.omega;
        artifact["alpha"] = p.alpha;
        artifact["beta"] = p.beta;
        artifact["objective"] = p.objective;
        artifact["arma_stable"] = p.arma_stable;
        artifact["optimizer_converged"] = p.optimizer_converged;
        const auto path = out_dir / (name + "_fit.json");
        write_file(path, artifact.dump(2) + "\n");
        std::cout << "wrote " << path.string() << "\n";
    } else {
        std::cout << name << " has no trainable parameters\n";
    }
    return kExitOk;
}

int run_forecast(const hourcast::LoadedConfig& loaded, const std::string& name, int horizon,
                 const std::string& weights_path) {
    const auto& cfg = loaded.config;
    const Dataset data = build_dataset(cfg);
    const SplitData sd = split_dataset(data, cfg);

    auto model = hourcast::make_forecaster(name, cfg);
    if (!weights_path.empty()) {
        auto* lstm = dynamic_cast<hourcast::LstmForecaster*>(model.get());
        if (!lstm) throw hourcast::ConfigError("--weights only applies to lstm models");
        auto loaded_weights = hourcast::load_weights(weights_path);
        lstm->restore(std::move(loaded_weights.weights), loaded_weights.scaling);
    } else {
        model->fit(sd.parts.train, sd.train_tmax ? &*sd.train_tmax : nullptr);
    }

    if (horizon <= 0) {
        horizon = model->horizon_hours() == hourcast::Forecaster::kFullSpan
                      ? hourcast::kHoursPerWeek
                      : model->horizon_hours();
    }
    hourcast::ForecastInput input{data.series, data.tmax ? &*data.tmax : nullptr};
    const auto fc = model->forecast(input, horizon);

    fs::create_directories(cfg.out_dir);
    const fs::path path = fs::path(cfg.out_dir) / "forecast.csv";
    std::ostringstream os;
    os << "timestamp,forecast\n";
    os.precision(17);
    for (int j = 0; j < fc.horizon_hours; ++j)
        os << hourcast::to_string(hourcast::add_hours(fc.forecast_start(), j)) << ','
           << fc.point[static_cast<std::size_t>(j)] << '\n';
    write_file(path, os.str());
    std::cout << "wrote " << path.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hourly patient-arrival forecasting toolkit"};
    app.require_subcommand(1);

    CommonArgs common;
    const auto add_common = [&common](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "JSON config file");
        cmd->add_option("--seed", common.seed, "override the global seed");
        cmd->add_option("--out-dir", common.out_dir, "output directory");
    };

    // ingest
    auto* ingest = app.add_subcommand("ingest", "aggregate arrival events into an hourly CSV");
    std::string events_path, out_path;
    ingest->add_option("--events", events_path, "events CSV (patient_id,arrival_time,department)")
        ->required();
    ingest->add_option("--out", out_path, "output hourly CSV")->required();
    add_common(ingest);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic hourly arrival series");
    int synth_weeks = 124;
    std::uint64_t synth_seed = 42;
    std::string synth_out, synth_start = "2004-01-05";
    hourcast::ProfileParams profile;
    synth->add_option("--weeks", synth_weeks, "number of weeks");
    synth->add_option("--seed", synth_seed, "generator seed");
    synth->add_option("--out", synth_out, "output hourly CSV")->required();
    synth->add_option("--start", synth_start, "series start (a Monday)");
    synth->add_option("--base", profile.base, "mean arrivals per hour");
    synth->add_option("--morning-amp", profile.morning_amp, "morning surge amplitude");
    synth->add_option("--evening-amp", profile.evening_amp, "evening surge amplitude");
    synth->add_option("--weekend-factor", profile.weekend_factor, "Friday/Saturday scaling");
    synth->add_option("--shabbat-factor", profile.shabbat_factor, "Shabbat window scaling");

    // train / evaluate / compare / forecast
    auto* train = app.add_subcommand("train", "fit one model and write its artifact");
    std::string model_name;
    train->add_option("--model", model_name, "model name")->required();
    add_common(train);

    auto* evaluate = app.add_subcommand("evaluate", "rolling evaluation of one model");
    evaluate->add_option("--model", model_name, "model name")->required();
    add_common(evaluate);

    auto* compare = app.add_subcommand("compare", "evaluate every model listed in the config");
    add_common(compare);

    auto* forecast = app.add_subcommand("forecast", "forecast past the end of the data");
    int forecast_horizon = 0;
    std::string weights_path;
    forecast->add_option("--model", model_name, "model name")->required();
    forecast->add_option("--horizon", forecast_horizon, "hours to forecast");
    forecast->add_option("--weights", weights_path, "reuse a saved lstm weights artifact");
    add_common(forecast);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (ingest->parsed()) {
            const auto loaded = load_with_overrides(common);
            const auto events = hourcast::parse_arrival_events(events_path);
            hourcast::HourRange window{};
            if (!common.config_path.empty() || events.empty()) {
                const auto& split = loaded.config.split;
                window = {split.train_start, split.test_end};
            } else {
                window = {events.front().hour, hourcast::add_hours(events.back().hour, 1)};
            }
            auto series = hourcast::aggregate_hourly(events, window);
            series = hourcast::apply_exclusions(std::move(series), loaded.config.split);
            hourcast::write_hourly_csv(out_path, series);
            std::cout << "wrote " << out_path << " (" << series.size() << " hours)\n";
            return kExitOk;
        }
        if (synth->parsed()) {
            const auto start = hourcast::parse_point(synth_start);
            if (!start) throw hourcast::ConfigError("--start: cannot parse '" + synth_start + "'");
            const auto series =
                hourcast::simulate(profile_from(profile), synth_weeks, synth_seed, *start);
            hourcast::write_hourly_csv(synth_out, series);
            std::cout << "wrote " << synth_out << " (" << series.size() << " hours)\n";
            return kExitOk;
        }
        const auto loaded = load_with_overrides(common);
        if (train->parsed()) return run_train(loaded, model_name);
        if (evaluate->parsed()) return run_compare(loaded, {model_name});
        if (compare->parsed()) return run_compare(loaded, loaded.config.models);
        if (forecast->parsed())
            return run_forecast(loaded, model_name, forecast_horizon, weights_path);
    } catch (const hourcast::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const hourcast::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitModelFailure;
    }
    return kExitOk;
}
