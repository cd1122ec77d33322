// Acceptance suite: runs every criterion at its pinned tolerance and prints
// one PASS/FAIL/SKIP line per criterion. Exits nonzero when any criterion
// fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "hourcast/harness.hpp"
#include "hourcast/kalman.hpp"
#include "hourcast/lstm.hpp"
#include "hourcast/metrics.hpp"
#include "hourcast/naive.hpp"
#include "hourcast/rvar.hpp"
#include "hourcast/synth.hpp"
#include "hourcast/tbats.hpp"
#include "../oracles.hpp"

namespace fs = std::filesystem;
using namespace hourcast;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    enum Kind { kPass, kFail, kSkip } kind = kPass;
    std::string detail;
};

Outcome pass(std::string detail = "") { return {Outcome::kPass, std::move(detail)}; }
Outcome fail(std::string detail) { return {Outcome::kFail, std::move(detail)}; }
Outcome skip(std::string detail) { return {Outcome::kSkip, std::move(detail)}; }

// ---- shared helpers -------------------------------------------------------

struct RandomInstance {
    KalmanHyperParams hp;
    std::vector<Eigen::VectorXd> rows;
    Eigen::VectorXd ys;
};

RandomInstance random_instance(std::mt19937& rng) {
    std::uniform_int_distribution<int> t_dist(1, 20), d_dist(1, 5);
    std::uniform_real_distribution<double> alpha_dist(0.5, 1.0), sigma_dist(0.3, 2.0),
        q_dist(0.01, 1.0), value(-2.0, 2.0);
    RandomInstance inst;
    const int t_len = t_dist(rng);
    const int d = d_dist(rng);
    inst.hp.alpha.resize(d);
    for (int i = 0; i < d; ++i) inst.hp.alpha[i] = alpha_dist(rng);
    inst.hp.sigma = sigma_dist(rng);
    inst.hp.q_scale = q_dist(rng);
    inst.hp.mu0.resize(d);
    for (int i = 0; i < d; ++i) inst.hp.mu0[i] = value(rng);
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) a(i, j) = value(rng);
    inst.hp.v0 = a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(d, d);
    inst.rows.resize(static_cast<std::size_t>(t_len));
    inst.ys.resize(t_len);
    for (int i = 0; i < t_len; ++i) {
        inst.rows[static_cast<std::size_t>(i)].resize(d);
        for (int j = 0; j < d; ++j) inst.rows[static_cast<std::size_t>(i)][j] = value(rng);
        inst.ys[i] = 3.0 * value(rng);
    }
    return inst;
}

std::vector<Observation> to_observations(const RandomInstance& inst) {
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < inst.rows.size(); ++i)
        obs.push_back({inst.rows[i], inst.ys[static_cast<Eigen::Index>(i)]});
    return obs;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

struct CliRun {
    int exit_code = -1;
    std::string output;
};

CliRun run_cli(const std::string& args) {
    const std::string cmd = std::string(HOURCAST_CLI_PATH) + " " + args + " 2>&1";
    std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
    CliRun result;
    if (!pipe) return result;
    std::array<char, 512> buf{};
    while (fgets(buf.data(), buf.size(), pipe.get())) result.output += buf.data();
    const int status = pclose(pipe.release());
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "hourcast_acceptance";
    fs::create_directories(dir);
    return dir;
}

std::optional<MetricsRow> find_row(const std::vector<MetricsRow>& rows, const std::string& name) {
    for (const auto& r : rows)
        if (r.model == name) return r;
    return std::nullopt;
}

// ---- criteria -------------------------------------------------------------

Outcome criterion_kalman_oracle() {
    const auto t0 = Clock::now();
    std::mt19937 rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(rng);
        const auto oracle = test::joint_gaussian_oracle(inst.hp, inst.rows, inst.ys);
        const auto state = filter(to_observations(inst), inst.hp);
        const double mean_err = (state.mu - oracle.posterior_mean).norm() /
                                std::max(1.0, oracle.posterior_mean.norm());
        const double cov_err = (state.v - oracle.posterior_cov).norm() /
                               std::max(1.0, oracle.posterior_cov.norm());
        worst = std::max({worst, mean_err, cov_err});
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "worst rel err " << worst << ", " << elapsed << "s";
    if (worst > 1e-8) return fail(os.str());
    if (elapsed >= 5.0) return fail(os.str() + " (budget 5s)");
    return pass(os.str());
}

Outcome criterion_marginal_likelihood() {
    std::mt19937 rng(101);  // the same instances as criterion 1
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const auto inst = random_instance(rng);
        const auto oracle = test::joint_gaussian_oracle(inst.hp, inst.rows, inst.ys);
        const double ll = log_marginal_likelihood(to_observations(inst), inst.hp);
        worst = std::max(worst,
                         std::abs(ll - oracle.log_density) / std::max(1.0, std::abs(oracle.log_density)));
    }
    std::ostringstream os;
    os << "worst rel err " << worst;
    return worst <= 1e-8 ? pass(os.str()) : fail(os.str());
}

Outcome criterion_hierarchical_marginal() {
    const int n = 1'000'000;
    const std::array<std::array<double, 3>, 5> triples{{{0.0, 1.0, 1.0},
                                                        {1.3, 0.8, 1.7},
                                                        {-2.0, 0.1, 3.0},
                                                        {5.0, 2.5, 0.4},
                                                        {0.7, 1.1, 1.1}}};
    std::mt19937_64 rng(424242);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (const auto& [theta, s, sigma] : triples) {
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double m = theta + s * unit(rng);
            const double x = m + sigma * unit(rng);
            sum += x;
            sq += x * x;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        const double true_var = s * s + sigma * sigma;
        const double mean_bound = 4.0 * std::sqrt(true_var / n);
        const double var_bound = 4.0 * true_var * std::sqrt(2.0 / (n - 1));
        if (std::abs(mean - theta) >= mean_bound || std::abs(var - true_var) >= var_bound) {
            std::ostringstream os;
            os << "triple (" << theta << "," << s << "," << sigma << "): mean err "
               << std::abs(mean - theta) << " vs " << mean_bound << ", var err "
               << std::abs(var - true_var) << " vs " << var_bound;
            return fail(os.str());
        }
    }
    return pass("5 triples within 4 standard errors at 1e6 draws");
}

Outcome criterion_rvar() {
    std::mt19937 rng(77);
    // monotone objective on 20 random instances
    for (int trial = 0; trial < 20; ++trial) {
        std::uniform_int_distribution<int> n_dist(3, 10), m_dist(12, 40), r_dist(1, 3);
        const int n = n_dist(rng);
        const Eigen::MatrixXd x1 = random_matrix(n, m_dist(rng), rng);
        const Eigen::MatrixXd x2 = random_matrix(n, x1.cols(), rng);
        const auto res = als(x2, x1, std::min(r_dist(rng), n), 40, 0.0, 1 + trial);
        for (std::size_t i = 1; i < res.objective_trace.size(); ++i)
            if (res.objective_trace[i] > res.objective_trace[i - 1] + 1e-10) {
                std::ostringstream os;
                os << "objective rose at iteration " << i << " (trial " << trial << ")";
                return fail(os.str());
            }
    }
    // full-rank: WV equals the least-squares oracle
    const Eigen::MatrixXd x1 = random_matrix(6, 30, rng);
    const Eigen::MatrixXd x2 = random_matrix(6, 30, rng);
    const auto full = als(x2, x1, 6, 200, 1e-14, 5);
    const Eigen::MatrixXd ols = x2 * x1.completeOrthogonalDecomposition().pseudoInverse();
    const double ls_err = (full.w * full.v - ols).cwiseAbs().maxCoeff();
    if (ls_err > 1e-6) return fail("least-squares mismatch " + std::to_string(ls_err));
    // exact recovery on synthetically rank-R data
    const int rank = 2;
    const Eigen::MatrixXd base = random_matrix(7, 30, rng);
    const Eigen::MatrixXd a = random_matrix(7, rank, rng) * random_matrix(rank, 7, rng);
    const auto rec = als(a * base, base, rank, 100, 1e-14, 9);
    if (rec.objective_trace.back() >= 1e-8)
        return fail("recovery objective " + std::to_string(rec.objective_trace.back()));
    std::ostringstream os;
    os << "monotone on 20 instances, ls err " << ls_err << ", recovery objective "
       << rec.objective_trace.back();
    return pass(os.str());
}

Outcome criterion_lstm_gradients() {
    const auto t0 = Clock::now();
    const double eps = 1e-5;
    double worst = 0.0;
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const LstmDims dims{1, 8, 12};
        auto w = init_weights(dims, seed);
        std::mt19937 rng(seed * 7919);
        std::normal_distribution<double> normal(0.0, 1.0);
        std::vector<TrainingWindow> batch(2);
        for (auto& window : batch) {
            window.inputs.resize(1, 24);
            for (Eigen::Index i = 0; i < window.inputs.size(); ++i)
                window.inputs.data()[i] = normal(rng);
            window.targets.resize(12);
            for (Eigen::Index i = 0; i < 12; ++i) window.targets[i] = normal(rng);
        }
        auto analytic = loss_and_gradients(batch, w);

        const auto spans = [](LstmWeights& x) {
            std::vector<std::pair<double*, std::size_t>> s;
            const auto add = [&](auto& block) {
                s.emplace_back(block.data(), static_cast<std::size_t>(block.size()));
            };
            add(x.w_i); add(x.w_f); add(x.w_g); add(x.w_o);
            add(x.u_i); add(x.u_f); add(x.u_g); add(x.u_o);
            add(x.b_i); add(x.b_f); add(x.b_g); add(x.b_o);
            add(x.head_w); add(x.head_b);
            return s;
        };
        const auto w_spans = spans(w);
        const auto g_spans = spans(analytic.gradients);
        for (std::size_t s = 0; s < w_spans.size(); ++s) {
            for (std::size_t k = 0; k < w_spans[s].second; ++k) {
                double& theta = w_spans[s].first[k];
                const double saved = theta;
                theta = saved + eps;
                const double up = loss_and_gradients(batch, w).loss;
                theta = saved - eps;
                const double down = loss_and_gradients(batch, w).loss;
                theta = saved;
                const double numeric = (up - down) / (2.0 * eps);
                const double g = g_spans[s].first[k];
                const double rel =
                    std::abs(g - numeric) / std::max({std::abs(g), std::abs(numeric), 1e-6});
                worst = std::max(worst, rel);
                if (rel > 1e-4) {
                    std::ostringstream os;
                    os << "seed " << seed << " block " << s << " index " << k << " rel err " << rel;
                    return fail(os.str());
                }
            }
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "worst rel err " << worst << ", " << elapsed << "s";
    if (elapsed >= 60.0) return fail(os.str() + " (budget 60s)");
    return pass(os.str());
}

Outcome criterion_naive_exactness() {
    const auto profile = build_profile(ProfileParams{});
    const auto full = simulate(profile, 16, 2718);
    const auto train = full.slice(0, 6 * kHoursPerWeek);
    const auto test = full.slice(6 * kHoursPerWeek, 10 * kHoursPerWeek);
    NaiveForecaster naive;
    const auto result = rolling_evaluate(naive, train, test);

    ErrorAccumulator direct;
    for (std::size_t k = train.size(); k < full.size(); ++k)
        direct.add(static_cast<double>(full.count_at(k - kHoursPerWeek)),
                   static_cast<double>(full.count_at(k)));
    const double mae_gap = std::abs(result.row.mae - direct.mae());
    const double mse_gap = std::abs(result.row.mse - direct.mse());
    std::ostringstream os;
    os << "mae gap " << mae_gap << ", mse gap " << mse_gap;
    return (mae_gap <= 1e-12 && mse_gap <= 1e-12) ? pass(os.str()) : fail(os.str());
}

Outcome criterion_tbats() {
    // seasonal rotation returns to the initial state after one full period
    TbatsConfig cfg;
    cfg.periods = {24, 168};
    cfg.harmonics = {3, 5};
    cfg.arma_p = cfg.arma_q = 0;
    const auto basis = make_basis(cfg);
    TbatsParams params;
    params.omega = 1.0;
    params.phi = cfg.phi;
    params.gamma1.assign(2, 0.0);
    params.gamma2.assign(2, 0.0);
    params.seasonal0 = {{1.1, -0.3, 0.8}, {0.4, 0.9, -1.2, 0.05, 0.6}};
    params.seasonal_star0 = {{-0.7, 0.2, 0.1}, {1.0, -0.4, 0.3, 0.2, -0.9}};
    for (std::size_t i = 0; i < cfg.periods.size(); ++i) {
        TbatsState state = initial_state(params, cfg);
        for (int t = 0; t < cfg.periods[i]; ++t) tbats_step(state, params, basis, std::nullopt);
        for (std::size_t j = 0; j < state.s[i].size(); ++j) {
            if (std::abs(state.s[i][j] - params.seasonal0[i][j]) > 1e-9 ||
                std::abs(state.s_star[i][j] - params.seasonal_star0[i][j]) > 1e-9)
                return fail("rotation did not return for period " + std::to_string(cfg.periods[i]));
        }
    }

    // Box-Cox round trip
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> value(1e-3, 100.0);
    for (double omega : {0.0, 0.5, 1.0}) {
        for (int i = 0; i < 100; ++i) {
            const double y = value(rng);
            if (std::abs(inv_boxcox(boxcox(y, omega), omega) - y) > 1e-12 * std::max(1.0, y))
                return fail("box-cox round trip failed at omega " + std::to_string(omega));
        }
    }

    // sinusoid fit
    std::vector<double> values;
    for (int t = 0; t < 14 * 24; ++t)
        values.push_back(100.0 + 10.0 * std::sin(2.0 * std::numbers::pi * t / 24.0));
    TbatsConfig sin_cfg;
    sin_cfg.periods = {24};
    sin_cfg.harmonics = {1};
    sin_cfg.arma_p = sin_cfg.arma_q = 0;
    sin_cfg.max_opt_evals = 400;
    const auto fit = tbats_fit(values, sin_cfg);
    const auto sin_basis = make_basis(sin_cfg);
    TbatsState state = initial_state(fit.params, sin_cfg);
    double sse = 0.0;
    for (double y : values) {
        const double z = boxcox(y + 1.0, fit.params.omega);
        const auto step = tbats_step(state, fit.params, sin_basis, z);
        const double pred = std::max(inv_boxcox(step.fitted, fit.params.omega) - 1.0, 0.0);
        sse += (pred - y) * (pred - y);
    }
    const double rms = std::sqrt(sse / static_cast<double>(values.size()));
    std::ostringstream os;
    os << "rotation 1e-9, round trip 1e-12, sinusoid rms " << rms;
    return rms < 0.1 ? pass(os.str()) : fail(os.str());
}

Outcome criterion_benchmark() {
    const auto t0 = Clock::now();
    const auto dir = work_dir();
    const auto cfg_path = dir / "benchmark.json";
    {
        std::ofstream out(cfg_path);
        out << R"({
  "seed": 1,
  "data": {"source": "synth", "weeks": 124, "seed": 20240},
  "split": {"train_weeks": 104, "test_weeks": 20},
  "models": ["naive", "tvlinear", "lstm3"],
  "tvlinear": {
    "tie_q_to_sigma": false,
    "q_grid": [1e-5, 1e-4, 1e-3, 1e-2],
    "sigma_grid": [2, 2.5, 3, 3.5, 4],
    "alpha_grid": [0.99, 0.999, 1.0]
  },
  "lstm": {"hidden_dim": 32, "epochs": 40, "learning_rate": 1e-3,
           "batch_size": 16, "momentum": 0.9}
})";
    }
    const auto run = run_cli("compare --config " + cfg_path.string() + " --out-dir " +
                             (dir / "benchmark_out").string());
    if (run.exit_code != 0) return fail("compare exited " + std::to_string(run.exit_code));
    const auto rows = parse_report_csv(slurp(dir / "benchmark_out" / "report.csv"));
    const auto naive = find_row(rows, "naive");
    const auto tvlinear = find_row(rows, "tvlinear");
    const auto lstm3 = find_row(rows, "lstm3");
    if (!naive || !tvlinear || !lstm3) return fail("missing rows in report.csv");
    const double elapsed = seconds_since(t0);
    std::ostringstream os;
    os << "naive mae " << naive->mae << ", tvlinear " << tvlinear->mae << ", lstm3 " << lstm3->mae
       << ", " << elapsed << "s";
    if (tvlinear->failed || lstm3->failed || naive->failed) return fail("a model failed: " + os.str());
    if (!(tvlinear->mae <= 0.97 * naive->mae)) return fail("tvlinear margin < 3%: " + os.str());
    if (!(lstm3->mae <= 0.97 * naive->mae)) return fail("lstm3 margin < 3%: " + os.str());
    if (elapsed >= 900.0) return fail(os.str() + " (budget 900s)");
    return pass(os.str());
}

Outcome criterion_reference_reproduction() {
    const char* events = std::getenv("HOURCAST_RAMBAM_EVENTS");
    if (!events || !*events)
        return skip("proprietary events CSV not supplied "
                    "(set HOURCAST_RAMBAM_EVENTS to run); criteria 1-8 and 10 form acceptance");
    const auto dir = work_dir();
    const auto cfg_path = dir / "rambam.json";
    {
        std::ofstream out(cfg_path);
        out << "{\n  \"data\": {\"source\": \"events_csv\", \"path\": \"" << events << "\"";
        if (const char* weather = std::getenv("HOURCAST_RAMBAM_WEATHER"); weather && *weather)
            out << ", \"weather\": \"" << weather << "\"";
        out << "},\n"
            << R"(  "split": {"train_start": "2004-01-01", "train_end": "2006-01-01",
             "test_start": "2007-01-01", "test_end": "2007-11-01",
             "exclusions": [["2006-01-01", "2007-01-01"]]},
  "models": ["naive", "rvar", "tvlinear", "tbats", "lstm3"],
  "tvlinear": {"tie_q_to_sigma": false,
               "q_grid": [1e-5, 1e-4, 1e-3, 1e-2],
               "sigma_grid": [2, 2.5, 3, 3.5, 4],
               "alpha_grid": [0.99, 0.999, 1.0]},
  "lstm": {"hidden_dim": 64, "epochs": 50}
})";
    }
    const auto run = run_cli("compare --config " + cfg_path.string() + " --out-dir " +
                             (dir / "rambam_out").string());
    if (run.exit_code != 0) return fail("compare exited " + std::to_string(run.exit_code));
    const auto rows = parse_report_csv(slurp(dir / "rambam_out" / "report.csv"));
    const struct {
        const char* model;
        double mae;
    } targets[] = {{"tvlinear", 4.27}, {"lstm3", 4.17}, {"tbats", 4.47}, {"naive", 4.94},
                   {"rvar", 4.96}};
    std::ostringstream os;
    bool ok = true;
    for (const auto& t : targets) {
        const auto row = find_row(rows, t.model);
        if (!row || row->failed) {
            ok = false;
            os << t.model << " missing; ";
            continue;
        }
        os << t.model << " mae " << row->mae << " (target " << t.mae << "); ";
        if (std::abs(row->mae - t.mae) > 0.10 * t.mae) ok = false;
    }
    return ok ? pass(os.str()) : fail(os.str());
}

Outcome criterion_reproducibility() {
    const auto dir = work_dir();
    const auto cfg_path = dir / "repro.json";
    {
        std::ofstream out(cfg_path);
        out << R"({
  "seed": 7,
  "data": {"source": "synth", "weeks": 16, "seed": 99},
  "split": {"train_weeks": 12, "test_weeks": 4},
  "models": ["naive", "rvar", "tvlinear", "lstm3"],
  "tvlinear": {"alpha_grid": [0.99, 1.0], "sigma_grid": [2, 3]},
  "lstm": {"hidden_dim": 6, "epochs": 2},
  "report": {"timing": "none"}
})";
    }
    const auto r1 = run_cli("compare --config " + cfg_path.string() + " --out-dir " +
                            (dir / "repro_a").string());
    const auto r2 = run_cli("compare --config " + cfg_path.string() + " --out-dir " +
                            (dir / "repro_b").string());
    if (r1.exit_code != 0 || r2.exit_code != 0)
        return fail("compare exited " + std::to_string(r1.exit_code) + "/" +
                    std::to_string(r2.exit_code));
    const auto a = slurp(dir / "repro_a" / "report.csv");
    const auto b = slurp(dir / "repro_b" / "report.csv");
    if (a.empty() || a != b) return fail("report.csv bytes differ between identical runs");
    return pass("byte-identical report.csv across two runs (4 models)");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "Kalman filter matches batch joint-Gaussian conditioning (rel 1e-8, 20 instances, <5s)",
         criterion_kalman_oracle},
        {2, "summed one-step log densities equal the joint log-density (1e-8)",
         criterion_marginal_likelihood},
        {3, "hierarchical sampling matches the closed-form marginal (1e6 draws, 4 SE, 5 triples)",
         criterion_hierarchical_marginal},
        {4, "ALS: monotone objective, least-squares agreement (1e-6), exact low-rank recovery (1e-8)",
         criterion_rvar},
        {5, "LSTM analytic gradients match central differences (rel 1e-4, 5 seeds, <60s)",
         criterion_lstm_gradients},
        {6, "harness persistence metrics equal direct week-over-week errors (1e-12)",
         criterion_naive_exactness},
        {7, "seasonal rotation (1e-9), Box-Cox round trip (1e-12), sinusoid fit rms < 0.1",
         criterion_tbats},
        {8, "synthetic benchmark: tvlinear and lstm3 beat persistence by >= 3% (<15min)",
         criterion_benchmark},
        {9, "real-data reproduction within 10% of the reference results (requires the events CSV)",
         criterion_reference_reproduction},
        {10, "byte-identical report.csv across identical runs", criterion_reproducibility},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::kPass   ? "PASS"
                          : outcome.kind == Outcome::kSkip ? "SKIP"
                                                           : "FAIL";
        if (outcome.kind == Outcome::kFail) ++failures;
        std::cout << tag << "  criterion " << c.id << ": " << c.title;
        if (!outcome.detail.empty()) std::cout << " -- " << outcome.detail;
        std::cout << "\n";
    }
    if (failures) std::cout << failures << " criterion(s) failed\n";
    return failures == 0 ? 0 : 1;
}
