#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "hourcast/forecaster.hpp"

namespace hourcast {

/// Hyperparameters of the time-varying linear Gaussian state-space model
///   beta_i = B beta_{i-1} + eps1,   B = diag(alpha)
///   y_i    = h_i . beta_i  + eps2,  Var eps2 = sigma^2,  Var eps1 = q_scale I
/// with beta_0 ~ N(mu0, v0).
struct KalmanHyperParams {
    Eigen::VectorXd alpha;
    double sigma = 1.0;
    double q_scale = 1.0;
    Eigen::VectorXd mu0;
    Eigen::MatrixXd v0;

    int dim() const { return static_cast<int>(alpha.size()); }
    static KalmanHyperParams diffuse(int dim, double alpha, double sigma, double q_scale,
                                     double prior_scale = 100.0);
};

/// Filtered posterior of the hidden coefficient process.
struct StateEstimate {
    Eigen::VectorXd mu;
    Eigen::MatrixXd v;
};

struct Prior {
    Eigen::VectorXd mean;  // B mu
    Eigen::MatrixXd cov;   // B V B' + Q, symmetrized
};

/// Regressors for one hourly observation: seven day-of-week indicators, the
/// count at the same hour one week earlier, and an intercept.
inline constexpr int kDesignDim = 9;
Eigen::VectorXd build_design_row(int hour_of_week, double lag168_count);

Prior predict_step(const StateEstimate& state, const KalmanHyperParams& hp);

/// Scalar-observation Kalman update; the innovation variance
/// h'Ph + sigma^2 is always positive for sigma > 0. The posterior covariance
/// is symmetrized after the rank-one downdate.
StateEstimate update_step(const Eigen::VectorXd& prior_mean, const Eigen::MatrixXd& prior_cov,
                          const Eigen::VectorXd& h, double y, double sigma);

/// One-step predictive distribution: N(h . prior_mean, sigma^2 + h'Ph).
Gaussian1D predictive_density(const Eigen::VectorXd& prior_mean, const Eigen::MatrixXd& prior_cov,
                              const Eigen::VectorXd& h, double sigma);

struct Observation {
    Eigen::VectorXd h;
    double y = 0.0;
};

/// Sum of one-step log predictive densities; the first term uses (mu0, v0).
/// This equals the log joint density of the observations with the hidden
/// states integrated out.
double log_marginal_likelihood(std::span<const Observation> obs, const KalmanHyperParams& hp);

/// Runs the filter over the observations and returns the final posterior.
StateEstimate filter(std::span<const Observation> obs, const KalmanHyperParams& hp);

struct KalmanGrid {
    std::vector<double> alpha = {0.90, 0.95, 0.99, 1.0};
    std::vector<double> sigma = {1.0, 2.0, 3.0, 4.0, 5.0};
    /// Candidate state-noise variances; ignored while tie_q_to_sigma is set
    /// (then q = sigma^2, the tied default).
    std::vector<double> q_scale = {};
    bool tie_q_to_sigma = true;
    double prior_scale = 100.0;  // v0 = prior_scale^2 I... see diffuse()
};

struct GridSearchResult {
    KalmanHyperParams best;
    double best_log_likelihood = 0.0;
    std::size_t evaluated = 0;
};

/// Exhaustive search maximizing the marginal likelihood. Ties break toward
/// the smallest (sigma, q_scale, |alpha-1|) lexicographically.
GridSearchResult grid_search(std::span<const Observation> obs, int dim, const KalmanGrid& grid);

/// Forecasts a whole week from the end-of-week state: one predict step
/// P = B V B' + Q, then for each design row point = h . B mu and variance
/// sigma^2 + h'Ph. The state itself is not advanced. Reported points are
/// clamped at zero; predictive variances are attached.
ForecastResult forecast_week(const StateEstimate& state, const KalmanHyperParams& hp,
                             std::span<const Eigen::VectorXd> design_rows, HourStamp origin);

struct KalmanOptions {
    KalmanGrid grid;
};

/// Model name "tvlinear". Fitting grid-searches the hyperparameters on the
/// training hours, then filters through them; each forecast call first
/// consumes any newly observed context hours (online updating), then emits
/// the next week.
class KalmanForecaster final : public Forecaster {
public:
    explicit KalmanForecaster(KalmanOptions opt = {}) : opt_(std::move(opt)) {}
    std::string name() const override { return "tvlinear"; }
    int horizon_hours() const override { return kHoursPerWeek; }
    void fit(const HourlyCountSeries& train, const std::vector<double>*) override;
    ForecastResult forecast(const ForecastInput& input, int horizon_hours) override;

    const KalmanHyperParams& hyper_params() const { return hp_; }
    const StateEstimate& state() const { return state_; }

private:
    void consume(const HourlyCountSeries& history);

    KalmanOptions opt_;
    KalmanHyperParams hp_;
    StateEstimate state_;
    std::int64_t consumed_until_ = 0;  // absolute hour index of the next unconsumed hour
    bool fitted_ = false;
};

}  // namespace hourcast
