#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hourcast/forecaster.hpp"

namespace hourcast {

struct LstmDims {
    int input = 1;
    int hidden = 64;
    int output = 72;  // k*24 forecast hours
};

/// Gate parameters (input, forget, cell candidate, output) plus the affine
/// forecast head mapping the final hidden vector to k*24 hours.
struct LstmWeights {
    Eigen::MatrixXd w_i, w_f, w_g, w_o;  // hidden x input
    Eigen::MatrixXd u_i, u_f, u_g, u_o;  // hidden x hidden
    Eigen::VectorXd b_i, b_f, b_g, b_o;  // hidden
    Eigen::MatrixXd head_w;              // output x hidden
    Eigen::VectorXd head_b;              // output

    LstmDims dims() const;
    bool same_shape(const LstmWeights& other) const;

    LstmWeights& operator+=(const LstmWeights& g);
    LstmWeights& operator*=(double s);
    static LstmWeights zeros(const LstmDims& dims);
};

/// Seeded uniform(-s, s) initialization with s = 1/sqrt(hidden).
LstmWeights init_weights(const LstmDims& dims, std::uint64_t seed);

/// Per-feature z-score constants computed from training data only.
struct FeatureScaling {
    double count_mean = 0.0;
    double count_scale = 1.0;
    double tmax_mean = 0.0;
    double tmax_scale = 1.0;
};

struct LstmCellState {
    Eigen::VectorXd h, c;
};

/// One gated update: sigmoid input/forget/output gates, tanh candidate,
/// c' = f.c + i.g, h' = o.tanh(c').
LstmCellState lstm_cell(const Eigen::VectorXd& h, const Eigen::VectorXd& c,
                        const Eigen::VectorXd& x, const LstmWeights& w);

/// Folds lstm_cell over the window columns oldest-first from a zero state
/// and returns the final hidden vector.
Eigen::VectorXd encode_window(const Eigen::MatrixXd& inputs, const LstmWeights& w);

/// Affine head in normalized space followed by de-normalization back to the
/// count scale. Clamping at zero happens where forecasts are reported, not
/// here.
Eigen::VectorXd predict_head(const Eigen::VectorXd& h, const LstmWeights& w,
                             const FeatureScaling& scaling);

/// 168 normalized input columns and k*24 normalized targets, none masked.
struct TrainingWindow {
    Eigen::MatrixXd inputs;   // input_dim x 168
    Eigen::VectorXd targets;  // k*24
};

FeatureScaling compute_scaling(const HourlyCountSeries& train, const std::vector<double>* tmax);

/// Builds windows at the given stride; a window whose input or target spans
/// any masked hour is dropped.
std::vector<TrainingWindow> make_windows(const HourlyCountSeries& series,
                                         const std::vector<double>* tmax, int k_days, int stride,
                                         const FeatureScaling& scaling);

/// Squared error summed over each window's outputs and averaged over the
/// batch, plus exact gradients for all weights via backpropagation through
/// time.
struct LossAndGradients {
    double loss = 0.0;
    LstmWeights gradients;
};
LossAndGradients loss_and_gradients(std::span<const TrainingWindow> batch, const LstmWeights& w);

struct LstmTrainConfig {
    int hidden_dim = 64;
    int k_days = 3;  // 3 or 7 for the shipped variants
    double learning_rate = 1e-3;
    int epochs = 50;
    int batch_size = 32;
    std::uint64_t seed = 1;
    int stride = 24;
    bool use_weather = false;
    double momentum = 0.0;  // 0 = plain SGD
};

struct LstmTrainResult {
    LstmWeights weights;
    FeatureScaling scaling;
    std::vector<double> loss_trace;  // mean batch loss per epoch
};

/// SGD over seeded-shuffled minibatches for the configured epochs.
/// Deterministic given the seed and config.
LstmTrainResult train_lstm(const HourlyCountSeries& train, const std::vector<double>* tmax,
                           const LstmTrainConfig& cfg);

/// Flat text artifact with a dimension header; exact round trip.
void save_weights(const std::string& path, const LstmWeights& w, const FeatureScaling& scaling);
struct LoadedWeights {
    LstmWeights weights;
    FeatureScaling scaling;
};
LoadedWeights load_weights(const std::string& path);

/// Variants: lstm3, lstm7 and their -w weather-augmented twins.
class LstmForecaster final : public Forecaster {
public:
    LstmForecaster(std::string name, LstmTrainConfig cfg) : name_(std::move(name)), cfg_(cfg) {}
    std::string name() const override { return name_; }
    int horizon_hours() const override { return cfg_.k_days * kHoursPerDay; }
    void fit(const HourlyCountSeries& train, const std::vector<double>* train_tmax) override;
    ForecastResult forecast(const ForecastInput& input, int horizon_hours) override;

    const LstmTrainResult& trained() const { return result_; }
    void restore(LstmWeights w, FeatureScaling s);

private:
    std::string name_;
    LstmTrainConfig cfg_;
    LstmTrainResult result_;
    bool fitted_ = false;
};

}  // namespace hourcast
