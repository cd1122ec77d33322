#include "hourcast/registry.hpp"

#include "hourcast/naive.hpp"

namespace hourcast {

std::unique_ptr<Forecaster> make_forecaster(const std::string& name, const RunConfig& cfg) {
    if (name == "naive") return std::make_unique<NaiveForecaster>();
    if (name == "rvar") return std::make_unique<RvarForecaster>(cfg.rvar);
    if (name == "tvlinear") return std::make_unique<KalmanForecaster>(cfg.kalman);
    if (name == "tbats") return std::make_unique<TbatsForecaster>(cfg.tbats);
    if (name == "lstm3" || name == "lstm7" || name == "lstm3w" || name == "lstm7w") {
        LstmTrainConfig lc = cfg.lstm;
        lc.k_days = (name[4] == '3') ? 3 : 7;
        lc.use_weather = name.ends_with('w');
        return std::make_unique<LstmForecaster>(name, lc);
    }
    throw ConfigError("unknown model name '" + name + "'");
}

}  // namespace hourcast
