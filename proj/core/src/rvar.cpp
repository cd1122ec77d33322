#include "hourcast/rvar.hpp"

#include <random>
#include <stdexcept>

namespace hourcast {

namespace {

Eigen::MatrixXd pinv(const Eigen::MatrixXd& m) {
    return m.completeOrthogonalDecomposition().pseudoInverse();
}

double frobenius_objective(const Eigen::MatrixXd& x2, const Eigen::MatrixXd& x1,
                           const Eigen::MatrixXd& w, const Eigen::MatrixXd& v) {
    return 0.5 * (x2 - w * v * x1).squaredNorm();
}

}  // namespace

LagMatrices build_lag_matrices(std::span<const WeekBlock> weeks, int lag_order) {
    const int p = lag_order;
    if (p < 1) throw std::invalid_argument("build_lag_matrices: lag order must be >= 1");
    const int t_weeks = static_cast<int>(weeks.size());
    if (t_weeks < p + 1) throw std::invalid_argument("build_lag_matrices: need at least p+1 weeks");

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(kHoursPerWeek);
    int observed = 0;
    for (const auto& wk : weeks) {
        if (!wk.fully_observed) continue;
        for (int j = 0; j < kHoursPerWeek; ++j) mean[j] += wk.values[static_cast<std::size_t>(j)];
        ++observed;
    }
    if (observed == 0) throw std::invalid_argument("build_lag_matrices: no fully observed weeks");
    mean /= static_cast<double>(observed);

    // keep columns whose target and all p predecessor weeks are observed
    std::vector<int> kept;
    for (int k = 0; k + p < t_weeks; ++k) {
        bool ok = true;
        for (int j = 0; j <= p; ++j) ok = ok && weeks[static_cast<std::size_t>(k + j)].fully_observed;
        if (ok) kept.push_back(k);
    }
    if (kept.empty()) throw std::invalid_argument("build_lag_matrices: every column touches a masked week");

    LagMatrices lm;
    lm.lag_order = p;
    lm.mean = mean;
    lm.x1.resize(p * kHoursPerWeek, static_cast<Eigen::Index>(kept.size()));
    lm.x2.resize(kHoursPerWeek, static_cast<Eigen::Index>(kept.size()));
    for (std::size_t c = 0; c < kept.size(); ++c) {
        const int k = kept[c];
        const auto& target = weeks[static_cast<std::size_t>(k + p)];
        for (int j = 0; j < kHoursPerWeek; ++j)
            lm.x2(j, static_cast<Eigen::Index>(c)) = target.values[static_cast<std::size_t>(j)] - mean[j];
        // most recent lag first: week k+p-1 occupies rows [0,168)
        for (int lag = 1; lag <= p; ++lag) {
            const auto& wk = weeks[static_cast<std::size_t>(k + p - lag)];
            for (int j = 0; j < kHoursPerWeek; ++j)
                lm.x1((lag - 1) * kHoursPerWeek + j, static_cast<Eigen::Index>(c)) =
                    wk.values[static_cast<std::size_t>(j)] - mean[j];
        }
    }
    return lm;
}

AlsResult als(const Eigen::MatrixXd& x2, const Eigen::MatrixXd& x1, int rank, int max_iters,
              double tol, std::uint64_t seed, bool record_iterates) {
    if (x1.cols() != x2.cols()) throw std::invalid_argument("als: column count mismatch");
    if (rank < 1 || rank > x2.rows()) throw std::invalid_argument("als: rank out of range");
    if (x1.cols() < rank) throw std::invalid_argument("als: fewer columns than rank");
    if (x1.isZero(0.0)) throw std::invalid_argument("als: degenerate all-zero predictor matrix");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    AlsResult res;
    res.v.resize(rank, x1.rows());
    for (Eigen::Index i = 0; i < res.v.rows(); ++i)
        for (Eigen::Index j = 0; j < res.v.cols(); ++j) res.v(i, j) = normal(rng);

    const Eigen::MatrixXd x1_pinv = pinv(x1);
    double prev = -1.0;
    for (int iter = 0; iter < max_iters; ++iter) {
        res.w = x2 * pinv(res.v * x1);
        res.v = pinv(res.w) * x2 * x1_pinv;
        const double obj = frobenius_objective(x2, x1, res.w, res.v);
        res.objective_trace.push_back(obj);
        if (record_iterates) res.iterates.emplace_back(res.w, res.v);
        if (iter > 0) {
            const double decrease = prev - obj;
            if (decrease <= tol * std::max(prev, 1e-300)) break;
        }
        prev = obj;
    }
    return res;
}

RvarModel als_fit(const LagMatrices& lm, const RvarOptions& opt) {
    AlsResult res = als(lm.x2, lm.x1, opt.rank, opt.max_iters, opt.tol, opt.seed);
    RvarModel model;
    model.w = std::move(res.w);
    model.v = std::move(res.v);
    model.train_mean = lm.mean;
    model.rank = opt.rank;
    model.lag_order = lm.lag_order;
    model.objective_trace = std::move(res.objective_trace);
    return model;
}

ForecastResult rvar_forecast(const RvarModel& model, std::span<const WeekBlock> recent_weeks) {
    const int p = model.lag_order;
    if (static_cast<int>(recent_weeks.size()) != p)
        throw std::invalid_argument("rvar_forecast: need exactly p recent weeks");
    for (const auto& wk : recent_weeks)
        if (!wk.fully_observed) throw ContextError("rvar_forecast: masked input week");

    Eigen::VectorXd stacked(p * kHoursPerWeek);
    // recent_weeks is oldest first; stack most recent lag into rows [0,168)
    for (int lag = 1; lag <= p; ++lag) {
        const auto& wk = recent_weeks[static_cast<std::size_t>(p - lag)];
        for (int j = 0; j < kHoursPerWeek; ++j)
            stacked[(lag - 1) * kHoursPerWeek + j] =
                wk.values[static_cast<std::size_t>(j)] - model.train_mean[j];
    }
    const Eigen::VectorXd raw = model.train_mean + model.w * (model.v * stacked);

    ForecastResult out;
    out.origin = add_hours(recent_weeks.back().week_start, kHoursPerWeek - 1);
    out.horizon_hours = kHoursPerWeek;
    out.point.resize(kHoursPerWeek);
    for (int j = 0; j < kHoursPerWeek; ++j) out.point[static_cast<std::size_t>(j)] = std::max(raw[j], 0.0);
    return out;
}

void RvarForecaster::fit(const HourlyCountSeries& train, const std::vector<double>*) {
    const auto weeks = slice_weeks(train);
    model_ = als_fit(build_lag_matrices(weeks, opt_.lag_order), opt_);
}

ForecastResult RvarForecaster::forecast(const ForecastInput& input, int horizon_hours) {
    if (horizon_hours != kHoursPerWeek)
        throw std::invalid_argument("rvar: horizon must be one week");
    const auto weeks = last_observed_weeks(input.history, opt_.lag_order);
    if (static_cast<int>(weeks.size()) < opt_.lag_order)
        throw ContextError("rvar: not enough fully observed weeks before the origin");
    ForecastResult out = rvar_forecast(model_, weeks);
    out.origin = add_hours(input.history.end(), -1);
    return out;
}

}  // namespace hourcast
