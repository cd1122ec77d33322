#include <benchmark/benchmark.h>

#include <random>

#include "hourcast/kalman.hpp"
#include "hourcast/lstm.hpp"
#include "hourcast/rvar.hpp"
#include "hourcast/synth.hpp"
#include "hourcast/tbats.hpp"

namespace {

using namespace hourcast;

std::vector<Observation> weekly_observations(int weeks) {
    std::mt19937_64 rng(1);
    std::poisson_distribution<int> counts(9);
    std::vector<Observation> obs;
    obs.reserve(static_cast<std::size_t>(weeks) * kHoursPerWeek);
    for (int t = 0; t < weeks * kHoursPerWeek; ++t)
        obs.push_back({build_design_row(t % kHoursPerWeek, counts(rng)),
                       static_cast<double>(counts(rng))});
    return obs;
}

void BM_KalmanUpdateStep(benchmark::State& state) {
    const auto hp = KalmanHyperParams::diffuse(kDesignDim, 0.99, 2.0, 0.01);
    StateEstimate est{hp.mu0, hp.v0};
    const auto h = build_design_row(42, 11.0);
    for (auto _ : state) {
        const Prior prior = predict_step(est, hp);
        est = update_step(prior.mean, prior.cov, h, 9.0, hp.sigma);
        benchmark::DoNotOptimize(est.mu);
    }
}
BENCHMARK(BM_KalmanUpdateStep);

void BM_KalmanWeekFilter(benchmark::State& state) {
    const auto hp = KalmanHyperParams::diffuse(kDesignDim, 0.99, 2.0, 0.01);
    const auto obs = weekly_observations(1);
    for (auto _ : state) {
        auto est = filter(obs, hp);
        benchmark::DoNotOptimize(est.v);
    }
}
BENCHMARK(BM_KalmanWeekFilter);

void BM_KalmanLikelihoodYear(benchmark::State& state) {
    const auto hp = KalmanHyperParams::diffuse(kDesignDim, 0.99, 2.0, 0.01);
    const auto obs = weekly_observations(52);
    for (auto _ : state) {
        benchmark::DoNotOptimize(log_marginal_likelihood(obs, hp));
    }
}
BENCHMARK(BM_KalmanLikelihoodYear);

void BM_LstmCell(benchmark::State& state) {
    const LstmDims dims{1, static_cast<int>(state.range(0)), 72};
    const auto w = init_weights(dims, 3);
    const Eigen::VectorXd h = Eigen::VectorXd::Zero(dims.hidden);
    const Eigen::VectorXd c = Eigen::VectorXd::Zero(dims.hidden);
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.5);
    for (auto _ : state) {
        auto next = lstm_cell(h, c, x, w);
        benchmark::DoNotOptimize(next.h);
    }
}
BENCHMARK(BM_LstmCell)->Arg(32)->Arg(64);

void BM_LstmEncodeWeek(benchmark::State& state) {
    const LstmDims dims{1, 32, 72};
    const auto w = init_weights(dims, 3);
    const Eigen::MatrixXd inputs = Eigen::MatrixXd::Random(1, kHoursPerWeek);
    for (auto _ : state) {
        benchmark::DoNotOptimize(encode_window(inputs, w));
    }
}
BENCHMARK(BM_LstmEncodeWeek);

void BM_LstmGradientWindow(benchmark::State& state) {
    const LstmDims dims{1, 32, 72};
    const auto w = init_weights(dims, 3);
    std::vector<TrainingWindow> batch(1);
    batch[0].inputs = Eigen::MatrixXd::Random(1, kHoursPerWeek);
    batch[0].targets = Eigen::VectorXd::Random(72);
    for (auto _ : state) {
        auto lg = loss_and_gradients(batch, w);
        benchmark::DoNotOptimize(lg.loss);
    }
}
BENCHMARK(BM_LstmGradientWindow);

void BM_AlsIteration(benchmark::State& state) {
    std::mt19937 rng(5);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd x1(2 * kHoursPerWeek, 102), x2(kHoursPerWeek, 102);
    for (Eigen::Index i = 0; i < x1.size(); ++i) x1.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < x2.size(); ++i) x2.data()[i] = normal(rng);
    for (auto _ : state) {
        auto res = als(x2, x1, 8, 1, 0.0, 7);
        benchmark::DoNotOptimize(res.w);
    }
}
BENCHMARK(BM_AlsIteration);

void BM_TbatsWeekOfSteps(benchmark::State& state) {
    TbatsConfig cfg;
    const auto basis = make_basis(cfg);
    TbatsParams params;
    params.phi = cfg.phi;
    params.alpha = 0.05;
    params.beta = 0.005;
    params.gamma1.assign(2, 0.001);
    params.gamma2.assign(2, 0.001);
    params.ar.assign(1, 0.1);
    params.ma.assign(1, 0.1);
    params.seasonal0 = {{0.1, 0.1, 0.1}, {0.1, 0.1, 0.1, 0.1, 0.1}};
    params.seasonal_star0 = params.seasonal0;
    auto st = initial_state(params, cfg);
    for (auto _ : state) {
        for (int t = 0; t < kHoursPerWeek; ++t)
            benchmark::DoNotOptimize(tbats_step(st, params, basis, 2.3).fitted);
    }
}
BENCHMARK(BM_TbatsWeekOfSteps);

void BM_SynthYear(benchmark::State& state) {
    const auto profile = build_profile(ProfileParams{});
    for (auto _ : state) {
        auto series = simulate(profile, 52, 11);
        benchmark::DoNotOptimize(series.counts().data());
    }
}
BENCHMARK(BM_SynthYear);

}  // namespace

BENCHMARK_MAIN();
