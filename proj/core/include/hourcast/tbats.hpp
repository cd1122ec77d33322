#pragma once

#include <deque>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hourcast/forecaster.hpp"

namespace hourcast {

/// Box-Cox transform: (y^omega - 1)/omega, or log y at omega = 0.
/// Throws std::domain_error where the transform is undefined.
double boxcox(double y, double omega);
double inv_boxcox(double z, double omega);

/// Structural choices for the trigonometric seasonal state-space model:
/// multiple seasonal periods represented by Fourier pairs, damped local
/// trend, and ARMA(p,q) innovations on the Box-Cox scale.
struct TbatsConfig {
    std::vector<double> omega_grid = {0.0, 0.5, 1.0};
    std::vector<int> periods = {24, 168};
    std::vector<int> harmonics = {3, 5};
    int arma_p = 1;
    int arma_q = 1;
    double phi = 0.98;  // trend damping, in (0,1]
    int max_opt_evals = 2000;

    void validate() const;  // harmonics >= 1, 2k_i <= m_i, strictly increasing periods
};

struct TbatsParams {
    double omega = 0.0;  // selected Box-Cox parameter
    double phi = 0.98;   // trend damping, copied from the config at init
    double alpha = 0.0;  // level smoothing
    double beta = 0.0;   // trend smoothing
    std::vector<double> gamma1, gamma2;  // per seasonal component
    std::vector<double> ar, ma;
    double long_run_trend = 0.0;
    double level0 = 0.0;
    double trend0 = 0.0;
    std::vector<std::vector<double>> seasonal0, seasonal_star0;  // [period][harmonic]
    bool arma_stable = true;       // root check is reported, not enforced
    bool optimizer_converged = true;
    double objective = 0.0;        // sum of squared innovations at the optimum
};

struct TbatsState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<std::vector<double>> s, s_star;  // rotating Fourier pairs
    std::deque<double> d_history;    // most recent first, length max(p, 1)
    std::deque<double> eps_history;  // most recent first, length max(q, 1)
};

/// Precomputed rotation angles per period/harmonic.
struct SeasonalBasis {
    int period = 0;
    std::vector<double> cos_lambda, sin_lambda;
};
std::vector<SeasonalBasis> make_basis(const TbatsConfig& cfg);

TbatsState initial_state(const TbatsParams& params, const TbatsConfig& cfg);

struct TbatsStep {
    double fitted = 0.0;      // one-step prediction on the transformed scale
    double innovation = 0.0;  // 0 when forecasting
};

/// Advances the state by one hour. With an observation the innovation is
/// y_obs (transformed) minus the fitted value; without one the step runs
/// with a zero innovation (used for forecasting and for masked hours, where
/// time still passes so the seasonal phase stays on the calendar).
TbatsStep tbats_step(TbatsState& state, const TbatsParams& params,
                     std::span<const SeasonalBasis> basis, std::optional<double> y_obs);

struct TbatsFit {
    TbatsParams params;
    TbatsState state_after_train;
};

/// Values are offset by +1 before the Box-Cox transform (count series hit
/// zero at night); the offset comes back off after the inverse transform.
/// Fitting minimizes the sum of squared innovations with a simplex search
/// from a deterministic start; initial level/trend/seasonal states come from
/// an OLS regression of the detrended transformed series on the Fourier
/// basis. omega is chosen from omega_grid by in-sample error on the original
/// scale. The real-valued overload serves non-count series.
TbatsFit tbats_fit(const HourlyCountSeries& train, const TbatsConfig& cfg);
TbatsFit tbats_fit(const std::vector<double>& values, const TbatsConfig& cfg);

/// Objective Sum eps_t^2 for given parameters over the training series
/// (exposed so tests can compare the optimum against the deterministic
/// start).
double tbats_objective(const HourlyCountSeries& train, const TbatsParams& params,
                       const TbatsConfig& cfg);
double tbats_objective(const std::vector<double>& values, const TbatsParams& params,
                       const TbatsConfig& cfg);

/// Deterministic optimizer start used by tbats_fit for a given omega.
TbatsParams tbats_initial_params(const HourlyCountSeries& train, const TbatsConfig& cfg,
                                 double omega);
TbatsParams tbats_initial_params(const std::vector<double>& values, const TbatsConfig& cfg,
                                 double omega);

/// Zero-innovation iteration for `horizon` steps; fitted values are
/// inverse-transformed, offset-corrected and clamped at zero.
ForecastResult tbats_forecast(const TbatsParams& params, const TbatsConfig& cfg, TbatsState state,
                              int horizon, HourStamp origin);

class TbatsForecaster final : public Forecaster {
public:
    explicit TbatsForecaster(TbatsConfig cfg = {}) : cfg_(std::move(cfg)) {}
    std::string name() const override { return "tbats"; }
    /// Fit once on the training data, forecast the whole test span.
    int horizon_hours() const override { return kFullSpan; }
    void fit(const HourlyCountSeries& train, const std::vector<double>*) override;
    ForecastResult forecast(const ForecastInput& input, int horizon_hours) override;
    const TbatsParams& params() const { return fit_.params; }

private:
    TbatsConfig cfg_;
    TbatsFit fit_;
    std::int64_t trained_until_ = 0;
    bool fitted_ = false;
};

}  // namespace hourcast
