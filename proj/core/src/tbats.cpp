#include "hourcast/tbats.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nelder_mead.hpp"

namespace hourcast {

namespace {

constexpr double kCountOffset = 1.0;  // applied before Box-Cox, zeros occur at night

double badness() { return 1e300; }

// Spectral radius of the companion matrix of 1 - c1 z - ... - cn z^n;
// stationarity/invertibility needs it below one.
bool poly_stable(const std::vector<double>& coeffs) {
    const int n = static_cast<int>(coeffs.size());
    if (n == 0) return true;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = coeffs[static_cast<std::size_t>(i)];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    return companion.eigenvalues().cwiseAbs().maxCoeff() < 1.0;
}

}  // namespace

double boxcox(double y, double omega) {
    if (y < 0.0 || (y == 0.0 && omega <= 0.0))
        throw std::domain_error("boxcox: input outside the transform's domain");
    if (omega == 0.0) return std::log(y);
    return (std::pow(y, omega) - 1.0) / omega;
}

double inv_boxcox(double z, double omega) {
    if (omega == 0.0) return std::exp(z);
    const double base = 1.0 + omega * z;
    if (base < 0.0) throw std::domain_error("inv_boxcox: value outside the transform's range");
    return std::pow(base, 1.0 / omega);
}

void TbatsConfig::validate() const {
    if (periods.size() != harmonics.size())
        throw std::invalid_argument("tbats: periods/harmonics size mismatch");
    for (std::size_t i = 0; i < periods.size(); ++i) {
        if (harmonics[i] < 1) throw std::invalid_argument("tbats: harmonics must be >= 1");
        if (2 * harmonics[i] > periods[i])
            throw std::invalid_argument("tbats: need 2*k_i <= m_i");
        if (i > 0 && periods[i] <= periods[i - 1])
            throw std::invalid_argument("tbats: periods must be strictly increasing");
    }
    if (phi < 0.0 || phi > 1.0) throw std::invalid_argument("tbats: phi must lie in [0,1]");
    if (arma_p < 0 || arma_q < 0) throw std::invalid_argument("tbats: negative ARMA order");
    if (omega_grid.empty()) throw std::invalid_argument("tbats: empty omega grid");
    if (max_opt_evals < 1) throw std::invalid_argument("tbats: optimizer budget must be positive");
}

std::vector<SeasonalBasis> make_basis(const TbatsConfig& cfg) {
    std::vector<SeasonalBasis> basis;
    basis.reserve(cfg.periods.size());
    for (std::size_t i = 0; i < cfg.periods.size(); ++i) {
        SeasonalBasis b;
        b.period = cfg.periods[i];
        for (int j = 1; j <= cfg.harmonics[i]; ++j) {
            const double lambda = 2.0 * std::numbers::pi * j / cfg.periods[i];
            b.cos_lambda.push_back(std::cos(lambda));
            b.sin_lambda.push_back(std::sin(lambda));
        }
        basis.push_back(std::move(b));
    }
    return basis;
}

TbatsState initial_state(const TbatsParams& params, const TbatsConfig& cfg) {
    TbatsState state;
    state.level = params.level0;
    state.trend = params.trend0;
    state.s = params.seasonal0;
    state.s_star = params.seasonal_star0;
    state.d_history.assign(static_cast<std::size_t>(std::max(cfg.arma_p, 1)), 0.0);
    state.eps_history.assign(static_cast<std::size_t>(std::max(cfg.arma_q, 1)), 0.0);
    return state;
}

TbatsStep tbats_step(TbatsState& state, const TbatsParams& params,
                     std::span<const SeasonalBasis> basis, std::optional<double> y_obs) {
    double seasonal_sum = 0.0;
    for (const auto& component : state.s)
        for (double sj : component) seasonal_sum += sj;

    double d_hat = 0.0;
    for (std::size_t i = 0; i < params.ar.size(); ++i) d_hat += params.ar[i] * state.d_history[i];
    for (std::size_t j = 0; j < params.ma.size(); ++j) d_hat += params.ma[j] * state.eps_history[j];

    const double phi = params.phi;
    TbatsStep step;
    step.fitted = state.level + phi * state.trend + seasonal_sum + d_hat;
    step.innovation = y_obs ? (*y_obs - step.fitted) : 0.0;
    const double d = d_hat + step.innovation;

    const double new_level = state.level + phi * state.trend + params.alpha * d;
    const double new_trend =
        (1.0 - phi) * params.long_run_trend + phi * state.trend + params.beta * d;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto& s = state.s[i];
        auto& s_star = state.s_star[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double c = basis[i].cos_lambda[j];
            const double sn = basis[i].sin_lambda[j];
            const double sj = s[j];
            const double sj_star = s_star[j];
            s[j] = sj * c + sj_star * sn + params.gamma1[i] * d;
            s_star[j] = -sj * sn + sj_star * c + params.gamma2[i] * d;
        }
    }
    state.level = new_level;
    state.trend = new_trend;
    state.d_history.pop_back();
    state.d_history.push_front(d);
    state.eps_history.pop_back();
    state.eps_history.push_front(step.innovation);
    return step;
}

namespace {

// raw series representation shared by the count and real-valued paths;
// nullopt marks masked hours
std::vector<std::optional<double>> raw_values(const HourlyCountSeries& series) {
    std::vector<std::optional<double>> raw(series.size());
    for (std::size_t k = 0; k < series.size(); ++k)
        if (series.valid_at(k)) raw[k] = static_cast<double>(series.count_at(k));
    return raw;
}

std::vector<std::optional<double>> raw_values(const std::vector<double>& values) {
    std::vector<std::optional<double>> raw(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) raw[k] = values[k];
    return raw;
}

std::vector<std::optional<double>> transformed_series(
    const std::vector<std::optional<double>>& raw, double omega) {
    std::vector<std::optional<double>> z(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k)
        if (raw[k]) z[k] = boxcox(*raw[k] + kCountOffset, omega);
    return z;
}

double run_objective(const std::vector<std::optional<double>>& z, const TbatsParams& params,
                     const TbatsConfig& cfg, std::span<const SeasonalBasis> basis,
                     std::vector<double>* fitted_out = nullptr, TbatsState* state_out = nullptr) {
    TbatsState state = initial_state(params, cfg);
    double sse = 0.0;
    for (const auto& zk : z) {
        const TbatsStep step = tbats_step(state, params, basis, zk);
        if (zk) sse += step.innovation * step.innovation;
        if (fitted_out) fitted_out->push_back(step.fitted);
        if (!std::isfinite(sse)) return badness();
    }
    if (state_out) *state_out = std::move(state);
    return sse;
}

// Optimized parameters: smoothing coefficients, the long-run trend, and the
// ARMA coefficients. Initial states stay at their regression values.
Eigen::VectorXd pack(const TbatsParams& p) {
    Eigen::VectorXd x(3 + 2 * p.gamma1.size() + p.ar.size() + p.ma.size());
    Eigen::Index i = 0;
    x[i++] = p.alpha;
    x[i++] = p.beta;
    x[i++] = p.long_run_trend;
    for (std::size_t c = 0; c < p.gamma1.size(); ++c) {
        x[i++] = p.gamma1[c];
        x[i++] = p.gamma2[c];
    }
    for (double v : p.ar) x[i++] = v;
    for (double v : p.ma) x[i++] = v;
    return x;
}

TbatsParams unpack(const Eigen::VectorXd& x, TbatsParams base) {
    Eigen::Index i = 0;
    base.alpha = x[i++];
    base.beta = x[i++];
    base.long_run_trend = x[i++];
    for (std::size_t c = 0; c < base.gamma1.size(); ++c) {
        base.gamma1[c] = x[i++];
        base.gamma2[c] = x[i++];
    }
    for (auto& v : base.ar) v = x[i++];
    for (auto& v : base.ma) v = x[i++];
    return base;
}

double inverse_count(double fitted, double omega) {
    if (omega != 0.0 && 1.0 + omega * fitted <= 0.0) return 0.0;  // below the transform's floor
    return std::max(inv_boxcox(fitted, omega) - kCountOffset, 0.0);
}

}  // namespace

namespace {

TbatsParams initial_params_impl(const std::vector<std::optional<double>>& raw,
                                const TbatsConfig& cfg, double omega) {
    const auto z = transformed_series(raw, omega);

    // OLS of the transformed series on [1, t, Fourier basis]; coefficients
    // seed the level, trend and rotating seasonal states.
    int n_cols = 2;
    for (int k : cfg.harmonics) n_cols += 2 * k;
    std::vector<Eigen::Index> rows;
    for (std::size_t k = 0; k < z.size(); ++k)
        if (z[k]) rows.push_back(static_cast<Eigen::Index>(k));
    if (rows.empty()) throw std::invalid_argument("tbats: no observed training hours");

    Eigen::MatrixXd design(rows.size(), n_cols);
    Eigen::VectorXd target(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double t = static_cast<double>(rows[r]);
        Eigen::Index c = 0;
        design(static_cast<Eigen::Index>(r), c++) = 1.0;
        design(static_cast<Eigen::Index>(r), c++) = t;
        for (std::size_t i = 0; i < cfg.periods.size(); ++i) {
            for (int j = 1; j <= cfg.harmonics[i]; ++j) {
                const double lambda = 2.0 * std::numbers::pi * j / cfg.periods[i];
                design(static_cast<Eigen::Index>(r), c++) = std::cos(lambda * t);
                design(static_cast<Eigen::Index>(r), c++) = std::sin(lambda * t);
            }
        }
        target[static_cast<Eigen::Index>(r)] = *z[static_cast<std::size_t>(rows[r])];
    }
    const Eigen::VectorXd coeffs = design.completeOrthogonalDecomposition().solve(target);

    TbatsParams params;
    params.omega = omega;
    params.phi = cfg.phi;
    params.alpha = 0.05;
    params.beta = 0.005;
    params.gamma1.assign(cfg.periods.size(), 0.001);
    params.gamma2.assign(cfg.periods.size(), 0.001);
    params.ar.assign(static_cast<std::size_t>(cfg.arma_p), 0.1);
    params.ma.assign(static_cast<std::size_t>(cfg.arma_q), 0.1);

    const double intercept = coeffs[0];
    const double slope = coeffs[1];
    // fitted(t) = (l0 + phi*b) + t*(phi*b) for a steady trend b, so invert:
    params.trend0 = cfg.phi > 0.0 ? slope / cfg.phi : 0.0;
    params.long_run_trend = params.trend0;
    params.level0 = intercept - slope;
    Eigen::Index c = 2;
    for (std::size_t i = 0; i < cfg.periods.size(); ++i) {
        params.seasonal0.emplace_back();
        params.seasonal_star0.emplace_back();
        for (int j = 0; j < cfg.harmonics[i]; ++j) {
            params.seasonal0[i].push_back(coeffs[c++]);
            params.seasonal_star0[i].push_back(coeffs[c++]);
        }
    }
    return params;
}

TbatsFit fit_impl(const std::vector<std::optional<double>>& raw, const TbatsConfig& cfg) {
    cfg.validate();
    const int max_period = cfg.periods.empty() ? 1 : cfg.periods.back();
    if (static_cast<int>(raw.size()) < 2 * max_period)
        throw std::invalid_argument("tbats: training series shorter than two max periods");
    const auto basis = make_basis(cfg);

    TbatsFit best;
    double best_mse = std::numeric_limits<double>::infinity();
    bool have_best = false;
    for (double omega : cfg.omega_grid) {
        const auto z = transformed_series(raw, omega);
        TbatsParams start = initial_params_impl(raw, cfg, omega);
        auto objective = [&](const Eigen::VectorXd& x) {
            return run_objective(z, unpack(x, start), cfg, basis);
        };
        const auto opt = detail::nelder_mead(objective, pack(start), cfg.max_opt_evals);
        TbatsParams fitted = unpack(opt.x, start);
        fitted.objective = opt.value;
        fitted.optimizer_converged = opt.converged;
        fitted.arma_stable = poly_stable(fitted.ar) && poly_stable(fitted.ma);

        // candidates are compared on the original scale; transformed SSEs
        // from different omegas are not commensurable
        std::vector<double> fitted_values;
        fitted_values.reserve(raw.size());
        TbatsState end_state;
        run_objective(z, fitted, cfg, basis, &fitted_values, &end_state);
        double sse = 0.0;
        std::size_t n = 0;
        for (std::size_t k = 0; k < raw.size(); ++k) {
            if (!raw[k]) continue;
            const double err = inverse_count(fitted_values[k], omega) - *raw[k];
            sse += err * err;
            ++n;
        }
        const double scale_mse = n ? sse / static_cast<double>(n) : badness();
        if (!have_best || scale_mse < best_mse) {
            have_best = true;
            best_mse = scale_mse;
            best.params = std::move(fitted);
            best.state_after_train = std::move(end_state);
        }
    }
    return best;
}

}  // namespace

TbatsParams tbats_initial_params(const HourlyCountSeries& train, const TbatsConfig& cfg,
                                 double omega) {
    return initial_params_impl(raw_values(train), cfg, omega);
}

TbatsParams tbats_initial_params(const std::vector<double>& values, const TbatsConfig& cfg,
                                 double omega) {
    return initial_params_impl(raw_values(values), cfg, omega);
}

double tbats_objective(const HourlyCountSeries& train, const TbatsParams& params,
                       const TbatsConfig& cfg) {
    const auto basis = make_basis(cfg);
    return run_objective(transformed_series(raw_values(train), params.omega), params, cfg, basis);
}

double tbats_objective(const std::vector<double>& values, const TbatsParams& params,
                       const TbatsConfig& cfg) {
    const auto basis = make_basis(cfg);
    return run_objective(transformed_series(raw_values(values), params.omega), params, cfg, basis);
}

TbatsFit tbats_fit(const HourlyCountSeries& train, const TbatsConfig& cfg) {
    return fit_impl(raw_values(train), cfg);
}

TbatsFit tbats_fit(const std::vector<double>& values, const TbatsConfig& cfg) {
    return fit_impl(raw_values(values), cfg);
}

ForecastResult tbats_forecast(const TbatsParams& params, const TbatsConfig& cfg, TbatsState state,
                              int horizon, HourStamp origin) {
    if (horizon < 0) throw std::invalid_argument("tbats_forecast: negative horizon");
    const auto basis = make_basis(cfg);
    ForecastResult out;
    out.origin = origin;
    out.horizon_hours = horizon;
    out.point.reserve(static_cast<std::size_t>(horizon));
    for (int j = 0; j < horizon; ++j) {
        const TbatsStep step = tbats_step(state, params, basis, std::nullopt);
        out.point.push_back(inverse_count(step.fitted, params.omega));
    }
    return out;
}

void TbatsForecaster::fit(const HourlyCountSeries& train, const std::vector<double>*) {
    fit_ = tbats_fit(train, cfg_);
    trained_until_ = hour_index(train.end());
    fitted_ = true;
}

ForecastResult TbatsForecaster::forecast(const ForecastInput& input, int horizon_hours) {
    if (!fitted_) throw std::logic_error("tbats: forecast before fit");
    const auto basis = make_basis(cfg_);
    // roll the state up to the origin: observed hours update it, masked ones
    // pass with zero innovation so the seasonal phase stays on the calendar
    const std::int64_t begin = hour_index(input.history.start());
    std::size_t from = 0;
    if (trained_until_ > begin) from = static_cast<std::size_t>(trained_until_ - begin);
    for (std::size_t k = from; k < input.history.size(); ++k) {
        std::optional<double> zk;
        if (input.history.valid_at(k))
            zk = boxcox(input.history.count_at(k) + kCountOffset, fit_.params.omega);
        tbats_step(fit_.state_after_train, fit_.params, basis, zk);
    }
    trained_until_ = hour_index(input.history.end());
    return tbats_forecast(fit_.params, cfg_, fit_.state_after_train, horizon_hours,
                          add_hours(input.history.end(), -1));
}

}  // namespace hourcast
