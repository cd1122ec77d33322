#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hourcast/forecaster.hpp"

namespace hourcast {

/// Stacked lag design for the weekly reduced-rank VAR. Column k of x2 is
/// week p+k (centered); column k of x1 stacks its p predecessor weeks, most
/// recent lag first. Columns touching a masked week are dropped.
struct LagMatrices {
    Eigen::MatrixXd x1;        // (p*168) x m
    Eigen::MatrixXd x2;        // 168 x m
    Eigen::VectorXd mean;      // 168-vector used for centering
    int lag_order = 0;
};

LagMatrices build_lag_matrices(std::span<const WeekBlock> weeks, int lag_order);

struct RvarOptions {
    int rank = 8;
    int lag_order = 2;
    int max_iters = 200;
    double tol = 1e-10;         // relative objective decrease stopping rule
    std::uint64_t seed = 1;
};

struct AlsResult {
    Eigen::MatrixXd w;  // n2 x rank
    Eigen::MatrixXd v;  // rank x n1
    std::vector<double> objective_trace;          // 0.5*||x2 - w*v*x1||_F^2 per iteration
    std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> iterates;  // only when recorded
};

/// Alternating minimization of 0.5*||x2 - w*v*x1||_F^2. Each half-step is
/// the exact least-squares minimizer of its subproblem, computed with
/// pseudoinverses (x1 is non-square and v*x1 may be rank-deficient, so the
/// textbook inverses cannot be taken literally):
///   w <- x2 * pinv(v*x1),   v <- pinv(w) * x2 * pinv(x1)
/// v starts from a seeded standard-normal matrix. Stops when the relative
/// objective decrease falls below tol.
AlsResult als(const Eigen::MatrixXd& x2, const Eigen::MatrixXd& x1, int rank, int max_iters,
              double tol, std::uint64_t seed, bool record_iterates = false);

struct RvarModel {
    Eigen::MatrixXd w;          // 168 x rank
    Eigen::MatrixXd v;          // rank x (p*168)
    Eigen::VectorXd train_mean; // 168
    int rank = 0;
    int lag_order = 0;
    std::vector<double> objective_trace;
};

RvarModel als_fit(const LagMatrices& lm, const RvarOptions& opt);

/// One week ahead from the p most recent fully observed weeks (oldest
/// first): train_mean + W*V*(stacked centered weeks). Reported points are
/// clamped at zero.
ForecastResult rvar_forecast(const RvarModel& model, std::span<const WeekBlock> recent_weeks);

class RvarForecaster final : public Forecaster {
public:
    explicit RvarForecaster(RvarOptions opt = {}) : opt_(opt) {}
    std::string name() const override { return "rvar"; }
    int horizon_hours() const override { return kHoursPerWeek; }
    void fit(const HourlyCountSeries& train, const std::vector<double>*) override;
    ForecastResult forecast(const ForecastInput& input, int horizon_hours) override;
    const RvarModel& model() const { return model_; }

private:
    RvarOptions opt_;
    RvarModel model_;
};

}  // namespace hourcast
