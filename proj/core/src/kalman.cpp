#include "hourcast/kalman.hpp"

#include <cmath>
#include <stdexcept>
#include <tuple>

namespace hourcast {

namespace {

Eigen::MatrixXd symmetrized(Eigen::MatrixXd m) { return 0.5 * (m + m.transpose()); }

}  // namespace

KalmanHyperParams KalmanHyperParams::diffuse(int dim, double alpha, double sigma, double q_scale,
                                             double prior_scale) {
    KalmanHyperParams hp;
    hp.alpha = Eigen::VectorXd::Constant(dim, alpha);
    hp.sigma = sigma;
    hp.q_scale = q_scale;
    hp.mu0 = Eigen::VectorXd::Zero(dim);
    hp.v0 = prior_scale * prior_scale * Eigen::MatrixXd::Identity(dim, dim);
    return hp;
}

Eigen::VectorXd build_design_row(int hour_of_week, double lag168_count) {
    if (hour_of_week < 0 || hour_of_week >= kHoursPerWeek)
        throw std::invalid_argument("build_design_row: hour_of_week out of range");
    if (lag168_count < 0.0) throw std::invalid_argument("build_design_row: negative lag count");
    Eigen::VectorXd h = Eigen::VectorXd::Zero(kDesignDim);
    h[hour_of_week / kHoursPerDay] = 1.0;  // day indicator, Monday first
    h[7] = lag168_count;
    h[8] = 1.0;
    return h;
}

Prior predict_step(const StateEstimate& state, const KalmanHyperParams& hp) {
    const auto b = hp.alpha.asDiagonal();
    Prior prior;
    prior.mean = b * state.mu;
    Eigen::MatrixXd p = b * state.v * b;
    p.diagonal().array() += hp.q_scale;
    prior.cov = symmetrized(std::move(p));
    return prior;
}

StateEstimate update_step(const Eigen::VectorXd& prior_mean, const Eigen::MatrixXd& prior_cov,
                          const Eigen::VectorXd& h, double y, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("update_step: sigma must be positive");
    const Eigen::VectorXd ph = prior_cov * h;
    const double s = h.dot(ph) + sigma * sigma;  // innovation variance, > 0
    const Eigen::VectorXd gain = ph / s;
    StateEstimate post;
    post.mu = prior_mean + gain * (y - h.dot(prior_mean));
    post.v = symmetrized(prior_cov - gain * ph.transpose());
    return post;
}

Gaussian1D predictive_density(const Eigen::VectorXd& prior_mean, const Eigen::MatrixXd& prior_cov,
                              const Eigen::VectorXd& h, double sigma) {
    return {h.dot(prior_mean), sigma * sigma + h.dot(prior_cov * h)};
}

double log_marginal_likelihood(std::span<const Observation> obs, const KalmanHyperParams& hp) {
    StateEstimate state{hp.mu0, hp.v0};
    double ll = 0.0;
    for (const auto& ob : obs) {
        const Prior prior = predict_step(state, hp);
        ll += predictive_density(prior.mean, prior.cov, ob.h, hp.sigma).log_pdf(ob.y);
        state = update_step(prior.mean, prior.cov, ob.h, ob.y, hp.sigma);
    }
    return ll;
}

StateEstimate filter(std::span<const Observation> obs, const KalmanHyperParams& hp) {
    StateEstimate state{hp.mu0, hp.v0};
    for (const auto& ob : obs) {
        const Prior prior = predict_step(state, hp);
        state = update_step(prior.mean, prior.cov, ob.h, ob.y, hp.sigma);
    }
    return state;
}

GridSearchResult grid_search(std::span<const Observation> obs, int dim, const KalmanGrid& grid) {
    if (grid.alpha.empty() || grid.sigma.empty() ||
        (!grid.tie_q_to_sigma && grid.q_scale.empty()))
        throw std::invalid_argument("grid_search: empty grid axis");

    GridSearchResult result;
    bool have_best = false;
    auto tie_key = [](double sigma, double q, double alpha) {
        return std::make_tuple(sigma, q, std::abs(alpha - 1.0));
    };
    std::tuple<double, double, double> best_key;

    const std::vector<double> tied_q{0.0};  // placeholder, q derived from sigma
    const auto& q_axis = grid.tie_q_to_sigma ? tied_q : grid.q_scale;
    for (double alpha : grid.alpha) {
        for (double sigma : grid.sigma) {
            for (double q_candidate : q_axis) {
                const double q = grid.tie_q_to_sigma ? sigma * sigma : q_candidate;
                const auto hp =
                    KalmanHyperParams::diffuse(dim, alpha, sigma, q, grid.prior_scale);
                const double ll = log_marginal_likelihood(obs, hp);
                ++result.evaluated;
                const auto key = tie_key(sigma, q, alpha);
                if (!have_best || ll > result.best_log_likelihood ||
                    (ll == result.best_log_likelihood && key < best_key)) {
                    have_best = true;
                    result.best = hp;
                    result.best_log_likelihood = ll;
                    best_key = key;
                }
            }
        }
    }
    return result;
}

ForecastResult forecast_week(const StateEstimate& state, const KalmanHyperParams& hp,
                             std::span<const Eigen::VectorXd> design_rows, HourStamp origin) {
    const Prior prior = predict_step(state, hp);
    ForecastResult out;
    out.origin = origin;
    out.horizon_hours = static_cast<int>(design_rows.size());
    out.point.reserve(design_rows.size());
    std::vector<double> variances;
    variances.reserve(design_rows.size());
    for (const auto& h : design_rows) {
        const Gaussian1D g = predictive_density(prior.mean, prior.cov, h, hp.sigma);
        out.point.push_back(std::max(g.mean, 0.0));
        variances.push_back(g.variance);
    }
    out.predictive_variance = std::move(variances);
    return out;
}

namespace {

// Hourly observations with computable design rows: the hour itself and its
// lag-168 hour must both be unmasked. Masked hours contribute nothing; the
// filter does not advance over them, mirroring the protocol's removal of
// excluded spans.
std::vector<Observation> collect_observations(const HourlyCountSeries& series,
                                              std::size_t from_index) {
    std::vector<Observation> obs;
    for (std::size_t k = std::max<std::size_t>(from_index, kHoursPerWeek); k < series.size(); ++k) {
        if (!series.valid_at(k) || !series.valid_at(k - kHoursPerWeek)) continue;
        obs.push_back({build_design_row(hour_of_week(series.stamp_at(k)),
                                        static_cast<double>(series.count_at(k - kHoursPerWeek))),
                       static_cast<double>(series.count_at(k))});
    }
    return obs;
}

}  // namespace

void KalmanForecaster::fit(const HourlyCountSeries& train, const std::vector<double>*) {
    const auto obs = collect_observations(train, 0);
    if (obs.empty()) throw std::invalid_argument("tvlinear: no usable training hours");
    hp_ = grid_search(obs, kDesignDim, opt_.grid).best;
    state_ = filter(obs, hp_);
    consumed_until_ = hour_index(train.end());
    fitted_ = true;
}

void KalmanForecaster::consume(const HourlyCountSeries& history) {
    const std::int64_t begin = hour_index(history.start());
    std::size_t from = 0;
    if (consumed_until_ > begin) from = static_cast<std::size_t>(consumed_until_ - begin);
    if (from >= history.size()) return;
    for (const auto& ob : collect_observations(history, from)) {
        const Prior prior = predict_step(state_, hp_);
        state_ = update_step(prior.mean, prior.cov, ob.h, ob.y, hp_.sigma);
    }
    consumed_until_ = hour_index(history.end());
}

ForecastResult KalmanForecaster::forecast(const ForecastInput& input, int horizon_hours) {
    if (!fitted_) throw std::logic_error("tvlinear: forecast before fit");
    if (horizon_hours < 1 || horizon_hours > kHoursPerWeek)
        throw std::invalid_argument("tvlinear: horizon must be in [1,168]");
    consume(input.history);

    // lag-168 features for the coming week come from the just-observed week;
    // when that week is masked, fall back to the most recent fully observed
    // one (the same week persistence uses)
    const auto week = last_observed_week(input.history);
    if (!week) throw ContextError("tvlinear: no fully observed week precedes the origin");
    std::vector<Eigen::VectorXd> rows;
    rows.reserve(static_cast<std::size_t>(horizon_hours));
    const HourStamp first_hour = input.history.end();
    for (int j = 0; j < horizon_hours; ++j) {
        const HourStamp ts = add_hours(first_hour, j);
        rows.push_back(
            build_design_row(hour_of_week(ts), week->values[static_cast<std::size_t>(hour_of_week(ts))]));
    }
    return forecast_week(state_, hp_, rows, add_hours(first_hour, -1));
}

}  // namespace hourcast
