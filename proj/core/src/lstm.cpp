#include "hourcast/lstm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hourcast/csv.hpp"

namespace hourcast {

namespace {

Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) { return 1.0 / (1.0 + (-x).exp()); }

}  // namespace

LstmDims LstmWeights::dims() const {
    return {static_cast<int>(w_i.cols()), static_cast<int>(w_i.rows()),
            static_cast<int>(head_w.rows())};
}

bool LstmWeights::same_shape(const LstmWeights& o) const {
    return w_i.rows() == o.w_i.rows() && w_i.cols() == o.w_i.cols() &&
           head_w.rows() == o.head_w.rows() && head_w.cols() == o.head_w.cols();
}

LstmWeights& LstmWeights::operator+=(const LstmWeights& g) {
    w_i += g.w_i; w_f += g.w_f; w_g += g.w_g; w_o += g.w_o;
    u_i += g.u_i; u_f += g.u_f; u_g += g.u_g; u_o += g.u_o;
    b_i += g.b_i; b_f += g.b_f; b_g += g.b_g; b_o += g.b_o;
    head_w += g.head_w; head_b += g.head_b;
    return *this;
}

LstmWeights& LstmWeights::operator*=(double s) {
    w_i *= s; w_f *= s; w_g *= s; w_o *= s;
    u_i *= s; u_f *= s; u_g *= s; u_o *= s;
    b_i *= s; b_f *= s; b_g *= s; b_o *= s;
    head_w *= s; head_b *= s;
    return *this;
}

LstmWeights LstmWeights::zeros(const LstmDims& d) {
    LstmWeights w;
    w.w_i = w.w_f = w.w_g = w.w_o = Eigen::MatrixXd::Zero(d.hidden, d.input);
    w.u_i = w.u_f = w.u_g = w.u_o = Eigen::MatrixXd::Zero(d.hidden, d.hidden);
    w.b_i = w.b_f = w.b_g = w.b_o = Eigen::VectorXd::Zero(d.hidden);
    w.head_w = Eigen::MatrixXd::Zero(d.output, d.hidden);
    w.head_b = Eigen::VectorXd::Zero(d.output);
    return w;
}

LstmWeights init_weights(const LstmDims& dims, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double s = 1.0 / std::sqrt(static_cast<double>(dims.hidden));
    std::uniform_real_distribution<double> uniform(-s, s);
    LstmWeights w = LstmWeights::zeros(dims);
    const auto fill = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = uniform(rng);
    };
    const auto fill_vec = [&](Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = uniform(rng);
    };
    fill(w.w_i); fill(w.w_f); fill(w.w_g); fill(w.w_o);
    fill(w.u_i); fill(w.u_f); fill(w.u_g); fill(w.u_o);
    fill_vec(w.b_i); fill_vec(w.b_f); fill_vec(w.b_g); fill_vec(w.b_o);
    fill(w.head_w);
    fill_vec(w.head_b);
    return w;
}

LstmCellState lstm_cell(const Eigen::VectorXd& h, const Eigen::VectorXd& c,
                        const Eigen::VectorXd& x, const LstmWeights& w) {
    const Eigen::ArrayXd i = sigmoid((w.w_i * x + w.u_i * h + w.b_i).array());
    const Eigen::ArrayXd f = sigmoid((w.w_f * x + w.u_f * h + w.b_f).array());
    const Eigen::ArrayXd g = (w.w_g * x + w.u_g * h + w.b_g).array().tanh();
    const Eigen::ArrayXd o = sigmoid((w.w_o * x + w.u_o * h + w.b_o).array());
    LstmCellState next;
    next.c = (f * c.array() + i * g).matrix();
    next.h = (o * next.c.array().tanh()).matrix();
    return next;
}

Eigen::VectorXd encode_window(const Eigen::MatrixXd& inputs, const LstmWeights& w) {
    const int hidden = static_cast<int>(w.u_i.rows());
    LstmCellState state{Eigen::VectorXd::Zero(hidden), Eigen::VectorXd::Zero(hidden)};
    for (Eigen::Index t = 0; t < inputs.cols(); ++t)
        state = lstm_cell(state.h, state.c, inputs.col(t), w);
    return state.h;
}

Eigen::VectorXd predict_head(const Eigen::VectorXd& h, const LstmWeights& w,
                             const FeatureScaling& scaling) {
    const Eigen::VectorXd normalized = w.head_w * h + w.head_b;
    return (normalized.array() * scaling.count_scale + scaling.count_mean).matrix();
}

FeatureScaling compute_scaling(const HourlyCountSeries& train, const std::vector<double>* tmax) {
    FeatureScaling s;
    double sum = 0.0, sq = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < train.size(); ++k) {
        if (!train.valid_at(k)) continue;
        sum += train.count_at(k);
        sq += static_cast<double>(train.count_at(k)) * train.count_at(k);
        ++n;
    }
    if (n == 0) throw std::invalid_argument("compute_scaling: no valid training hours");
    s.count_mean = sum / static_cast<double>(n);
    const double var = sq / static_cast<double>(n) - s.count_mean * s.count_mean;
    s.count_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    if (tmax) {
        double wsum = 0.0, wsq = 0.0;
        std::size_t wn = 0;
        for (std::size_t k = 0; k < train.size(); ++k) {
            if (!train.valid_at(k)) continue;
            wsum += (*tmax)[k];
            wsq += (*tmax)[k] * (*tmax)[k];
            ++wn;
        }
        s.tmax_mean = wsum / static_cast<double>(wn);
        const double wvar = wsq / static_cast<double>(wn) - s.tmax_mean * s.tmax_mean;
        s.tmax_scale = wvar > 0.0 ? std::sqrt(wvar) : 1.0;
    }
    return s;
}

std::vector<TrainingWindow> make_windows(const HourlyCountSeries& series,
                                         const std::vector<double>* tmax, int k_days, int stride,
                                         const FeatureScaling& scaling) {
    if (stride < 1) throw std::invalid_argument("make_windows: stride must be >= 1");
    if (tmax && tmax->size() != series.size())
        throw std::invalid_argument("make_windows: weather not aligned with series");
    const int target_len = k_days * kHoursPerDay;
    const int window_len = kHoursPerWeek + target_len;
    const int input_dim = tmax ? 2 : 1;
    std::vector<TrainingWindow> windows;
    if (static_cast<int>(series.size()) < window_len) return windows;

    for (std::size_t first = 0; first + static_cast<std::size_t>(window_len) <= series.size();
         first += static_cast<std::size_t>(stride)) {
        bool ok = true;
        for (int j = 0; j < window_len && ok; ++j)
            ok = series.valid_at(first + static_cast<std::size_t>(j));
        if (!ok) continue;
        TrainingWindow w;
        w.inputs.resize(input_dim, kHoursPerWeek);
        for (int j = 0; j < kHoursPerWeek; ++j) {
            const std::size_t k = first + static_cast<std::size_t>(j);
            w.inputs(0, j) = (series.count_at(k) - scaling.count_mean) / scaling.count_scale;
            if (tmax) w.inputs(1, j) = ((*tmax)[k] - scaling.tmax_mean) / scaling.tmax_scale;
        }
        w.targets.resize(target_len);
        for (int j = 0; j < target_len; ++j) {
            const std::size_t k = first + static_cast<std::size_t>(kHoursPerWeek + j);
            w.targets[j] = (series.count_at(k) - scaling.count_mean) / scaling.count_scale;
        }
        windows.push_back(std::move(w));
    }
    return windows;
}

namespace {

struct StepTape {
    Eigen::ArrayXd i, f, g, o, c, tanh_c, h_prev, c_prev;
    Eigen::VectorXd x;
};

}  // namespace

LossAndGradients loss_and_gradients(std::span<const TrainingWindow> batch, const LstmWeights& w) {
    if (batch.empty()) throw std::invalid_argument("loss_and_gradients: empty batch");
    const LstmDims dims = w.dims();
    LossAndGradients out;
    out.gradients = LstmWeights::zeros(dims);

    // squared errors are summed over a window's outputs and averaged over
    // the batch, so duplicating the batch changes nothing
    const double denom = static_cast<double>(batch.size());
    std::vector<StepTape> tape;
    for (const auto& window : batch) {
        const Eigen::Index steps = window.inputs.cols();
        tape.clear();
        tape.reserve(static_cast<std::size_t>(steps));

        // forward, recording every gate activation
        Eigen::ArrayXd h = Eigen::ArrayXd::Zero(dims.hidden);
        Eigen::ArrayXd c = Eigen::ArrayXd::Zero(dims.hidden);
        for (Eigen::Index t = 0; t < steps; ++t) {
            StepTape s;
            s.x = window.inputs.col(t);
            s.h_prev = h;
            s.c_prev = c;
            s.i = sigmoid((w.w_i * s.x + w.u_i * h.matrix() + w.b_i).array());
            s.f = sigmoid((w.w_f * s.x + w.u_f * h.matrix() + w.b_f).array());
            s.g = (w.w_g * s.x + w.u_g * h.matrix() + w.b_g).array().tanh();
            s.o = sigmoid((w.w_o * s.x + w.u_o * h.matrix() + w.b_o).array());
            s.c = s.f * c + s.i * s.g;
            s.tanh_c = s.c.tanh();
            c = s.c;
            h = s.o * s.tanh_c;
            tape.push_back(std::move(s));
        }
        const Eigen::VectorXd pred = w.head_w * h.matrix() + w.head_b;
        const Eigen::VectorXd err = pred - window.targets;
        out.loss += err.squaredNorm() / denom;

        // head gradients and the seed for backpropagation through time
        const Eigen::VectorXd d_pred = 2.0 * err / denom;
        out.gradients.head_w += d_pred * h.matrix().transpose();
        out.gradients.head_b += d_pred;

        Eigen::ArrayXd dh = (w.head_w.transpose() * d_pred).array();
        Eigen::ArrayXd dc = Eigen::ArrayXd::Zero(dims.hidden);
        for (Eigen::Index t = steps - 1; t >= 0; --t) {
            const StepTape& s = tape[static_cast<std::size_t>(t)];
            dc += dh * s.o * (1.0 - s.tanh_c.square());
            const Eigen::ArrayXd d_o = dh * s.tanh_c;
            const Eigen::ArrayXd d_f = dc * s.c_prev;
            const Eigen::ArrayXd d_i = dc * s.g;
            const Eigen::ArrayXd d_g = dc * s.i;
            const Eigen::VectorXd a_i = (d_i * s.i * (1.0 - s.i)).matrix();
            const Eigen::VectorXd a_f = (d_f * s.f * (1.0 - s.f)).matrix();
            const Eigen::VectorXd a_g = (d_g * (1.0 - s.g.square())).matrix();
            const Eigen::VectorXd a_o = (d_o * s.o * (1.0 - s.o)).matrix();

            out.gradients.w_i += a_i * s.x.transpose();
            out.gradients.w_f += a_f * s.x.transpose();
            out.gradients.w_g += a_g * s.x.transpose();
            out.gradients.w_o += a_o * s.x.transpose();
            out.gradients.u_i += a_i * s.h_prev.matrix().transpose();
            out.gradients.u_f += a_f * s.h_prev.matrix().transpose();
            out.gradients.u_g += a_g * s.h_prev.matrix().transpose();
            out.gradients.u_o += a_o * s.h_prev.matrix().transpose();
            out.gradients.b_i += a_i;
            out.gradients.b_f += a_f;
            out.gradients.b_g += a_g;
            out.gradients.b_o += a_o;

            dh = (w.u_i.transpose() * a_i + w.u_f.transpose() * a_f + w.u_g.transpose() * a_g +
                  w.u_o.transpose() * a_o)
                     .array();
            dc *= s.f;
        }
    }
    return out;
}

LstmTrainResult train_lstm(const HourlyCountSeries& train, const std::vector<double>* tmax,
                           const LstmTrainConfig& cfg) {
    if (cfg.hidden_dim < 1 || cfg.k_days < 1 || cfg.epochs < 1 || cfg.batch_size < 1 ||
        cfg.learning_rate <= 0.0)
        throw std::invalid_argument("train_lstm: invalid hyperparameters");
    LstmTrainResult result;
    result.scaling = compute_scaling(train, cfg.use_weather ? tmax : nullptr);
    const auto windows =
        make_windows(train, cfg.use_weather ? tmax : nullptr, cfg.k_days, cfg.stride, result.scaling);
    if (windows.empty()) throw std::invalid_argument("train_lstm: no usable training windows");

    const LstmDims dims{cfg.use_weather ? 2 : 1, cfg.hidden_dim, cfg.k_days * kHoursPerDay};
    result.weights = init_weights(dims, cfg.seed);
    LstmWeights velocity = LstmWeights::zeros(dims);

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(windows.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<TrainingWindow> batch;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double epoch_loss = 0.0;
        std::size_t n_batches = 0;
        for (std::size_t pos = 0; pos < order.size(); pos += static_cast<std::size_t>(cfg.batch_size)) {
            batch.clear();
            for (std::size_t b = pos; b < std::min(pos + cfg.batch_size, order.size()); ++b)
                batch.push_back(windows[order[b]]);
            auto lg = loss_and_gradients(batch, result.weights);
            epoch_loss += lg.loss;
            ++n_batches;
            if (cfg.momentum > 0.0) {
                velocity *= cfg.momentum;
                lg.gradients *= -cfg.learning_rate;
                velocity += lg.gradients;
                result.weights += velocity;
            } else {
                lg.gradients *= -cfg.learning_rate;
                result.weights += lg.gradients;
            }
        }
        result.loss_trace.push_back(epoch_loss / static_cast<double>(n_batches));
    }
    return result;
}

void save_weights(const std::string& path, const LstmWeights& w, const FeatureScaling& scaling) {
    std::ofstream out(path);
    if (!out) throw ParseError(path, 0, "cannot open for writing");
    const LstmDims d = w.dims();
    out << "hourcast-lstm-weights 1\n";
    out << d.input << ' ' << d.hidden << ' ' << d.output << '\n';
    out.precision(17);
    out << scaling.count_mean << ' ' << scaling.count_scale << ' ' << scaling.tmax_mean << ' '
        << scaling.tmax_scale << '\n';
    const auto dump = [&](const Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j)
                out << m(i, j) << ((i + 1 == m.rows() && j + 1 == m.cols()) ? '\n' : ' ');
    };
    dump(w.w_i); dump(w.w_f); dump(w.w_g); dump(w.w_o);
    dump(w.u_i); dump(w.u_f); dump(w.u_g); dump(w.u_o);
    dump(w.b_i); dump(w.b_f); dump(w.b_g); dump(w.b_o);
    dump(w.head_w);
    dump(w.head_b);
    if (!out) throw ParseError(path, 0, "write failed");
}

LoadedWeights load_weights(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "hourcast-lstm-weights" || version != 1)
        throw ParseError(path, 1, "not a weights artifact");
    LstmDims d;
    in >> d.input >> d.hidden >> d.output;
    if (!in || d.input < 1 || d.hidden < 1 || d.output < 1)
        throw ParseError(path, 2, "bad dimension header");
    LoadedWeights loaded;
    in >> loaded.scaling.count_mean >> loaded.scaling.count_scale >> loaded.scaling.tmax_mean >>
        loaded.scaling.tmax_scale;
    loaded.weights = LstmWeights::zeros(d);
    const auto slurp = [&](Eigen::MatrixXd& m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) in >> m(i, j);
    };
    const auto slurp_vec = [&](Eigen::VectorXd& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) in >> v[i];
    };
    slurp(loaded.weights.w_i); slurp(loaded.weights.w_f);
    slurp(loaded.weights.w_g); slurp(loaded.weights.w_o);
    slurp(loaded.weights.u_i); slurp(loaded.weights.u_f);
    slurp(loaded.weights.u_g); slurp(loaded.weights.u_o);
    slurp_vec(loaded.weights.b_i); slurp_vec(loaded.weights.b_f);
    slurp_vec(loaded.weights.b_g); slurp_vec(loaded.weights.b_o);
    slurp(loaded.weights.head_w);
    slurp_vec(loaded.weights.head_b);
    if (!in) throw ParseError(path, 0, "truncated weights artifact");
    return loaded;
}

void LstmForecaster::fit(const HourlyCountSeries& train, const std::vector<double>* train_tmax) {
    if (cfg_.use_weather && !train_tmax)
        throw std::invalid_argument(name_ + ": weather feature requested but none supplied");
    result_ = train_lstm(train, train_tmax, cfg_);
    fitted_ = true;
}

void LstmForecaster::restore(LstmWeights w, FeatureScaling s) {
    const LstmDims d = w.dims();
    if (d.output != cfg_.k_days * kHoursPerDay || d.input != (cfg_.use_weather ? 2 : 1))
        throw std::invalid_argument(name_ + ": weights artifact has incompatible dimensions");
    result_.weights = std::move(w);
    result_.scaling = s;
    result_.loss_trace.clear();
    fitted_ = true;
}

ForecastResult LstmForecaster::forecast(const ForecastInput& input, int horizon_hours) {
    if (!fitted_) throw std::logic_error(name_ + ": forecast before fit");
    const int out_dim = cfg_.k_days * kHoursPerDay;
    if (horizon_hours < 1 || horizon_hours > out_dim)
        throw std::invalid_argument(name_ + ": horizon exceeds the trained forecast head");
    if (cfg_.use_weather && !input.tmax)
        throw std::invalid_argument(name_ + ": weather feature requested but none supplied");
    const auto& history = input.history;
    if (history.size() < kHoursPerWeek)
        throw ContextError(name_ + ": need a full week of context");

    // encode the most recent fully observed 168-hour stretch
    std::int64_t first = static_cast<std::int64_t>(history.size()) - kHoursPerWeek;
    for (; first >= 0; --first) {
        bool ok = true;
        for (int j = 0; j < kHoursPerWeek && ok; ++j)
            ok = history.valid_at(static_cast<std::size_t>(first) + static_cast<std::size_t>(j));
        if (ok) break;
    }
    if (first < 0) throw ContextError(name_ + ": no fully observed week in the context");

    const int input_dim = cfg_.use_weather ? 2 : 1;
    Eigen::MatrixXd inputs(input_dim, kHoursPerWeek);
    const auto& s = result_.scaling;
    for (int j = 0; j < kHoursPerWeek; ++j) {
        const std::size_t k = static_cast<std::size_t>(first) + static_cast<std::size_t>(j);
        inputs(0, j) = (history.count_at(k) - s.count_mean) / s.count_scale;
        if (cfg_.use_weather) inputs(1, j) = ((*input.tmax)[k] - s.tmax_mean) / s.tmax_scale;
    }
    const Eigen::VectorXd pred = predict_head(encode_window(inputs, result_.weights),
                                              result_.weights, s);
    ForecastResult out;
    out.origin = add_hours(history.end(), -1);
    out.horizon_hours = horizon_hours;
    out.point.resize(static_cast<std::size_t>(horizon_hours));
    for (int j = 0; j < horizon_hours; ++j) out.point[static_cast<std::size_t>(j)] = std::max(pred[j], 0.0);
    return out;
}

}  // namespace hourcast
