#include <doctest.h>

#include <stdexcept>

#include <random>

#include "hourcast/rvar.hpp"

using namespace hourcast;

namespace {

std::vector<WeekBlock> make_weeks(int n, unsigned seed = 2) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> value(0.0, 20.0);
    std::vector<WeekBlock> weeks(static_cast<std::size_t>(n));
    for (int w = 0; w < n; ++w) {
        weeks[static_cast<std::size_t>(w)].week_start = add_hours({2004, 1, 5, 0}, w * kHoursPerWeek);
        for (auto& v : weeks[static_cast<std::size_t>(w)].values) v = value(rng);
    }
    return weeks;
}

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

double objective(const Eigen::MatrixXd& x2, const Eigen::MatrixXd& x1, const Eigen::MatrixXd& w,
                 const Eigen::MatrixXd& v) {
    return 0.5 * (x2 - w * v * x1).squaredNorm();
}

}  // namespace

TEST_CASE("lag matrix shapes") {
    CHECK(build_lag_matrices(make_weeks(3), 2).x1.rows() == 336);
    CHECK(build_lag_matrices(make_weeks(3), 2).x1.cols() == 1);
    CHECK(build_lag_matrices(make_weeks(3), 2).x2.rows() == 168);
    CHECK(build_lag_matrices(make_weeks(10), 2).x2.cols() == 8);
    CHECK_THROWS_AS(build_lag_matrices(make_weeks(2), 2), std::invalid_argument);
}

TEST_CASE("columns touching a masked week are dropped") {
    auto weeks = make_weeks(10);
    weeks[5].fully_observed = false;
    const auto lm = build_lag_matrices(weeks, 2);
    CHECK(lm.x2.cols() == 5);  // columns for targets 5, 6, 7 vanish
}

TEST_CASE("stacking order puts the most recent lag first") {
    auto weeks = make_weeks(3);
    const auto lm = build_lag_matrices(weeks, 2);
    // single column: target week 2, lags are week 1 (rows 0..167) then week 0
    for (int j = 0; j < kHoursPerWeek; ++j) {
        CHECK(lm.x1(j, 0) ==
              doctest::Approx(weeks[1].values[static_cast<std::size_t>(j)] - lm.mean[j]));
        CHECK(lm.x1(kHoursPerWeek + j, 0) ==
              doctest::Approx(weeks[0].values[static_cast<std::size_t>(j)] - lm.mean[j]));
    }
}

TEST_CASE("als recovers exactly rank-one data") {
    const Eigen::MatrixXd x1 = random_matrix(6, 24, 3);
    const Eigen::MatrixXd a = random_matrix(6, 1, 4) * random_matrix(1, 6, 5);
    const Eigen::MatrixXd x2 = a * x1;
    const auto res = als(x2, x1, 1, 100, 1e-12, 7);
    CHECK(res.objective_trace.back() < 1e-8);
}

TEST_CASE("full-rank als matches the least-squares oracle") {
    const Eigen::MatrixXd x1 = random_matrix(6, 30, 11);
    const Eigen::MatrixXd x2 = random_matrix(6, 30, 12);
    const auto res = als(x2, x1, 6, 200, 1e-14, 1);
    const Eigen::MatrixXd ols =
        x2 * x1.completeOrthogonalDecomposition().pseudoInverse();
    CHECK((res.w * res.v - ols).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("objective trace is nonincreasing and honestly recorded") {
    const Eigen::MatrixXd x1 = random_matrix(8, 40, 21);
    const Eigen::MatrixXd x2 = random_matrix(8, 40, 22);
    const auto res = als(x2, x1, 3, 50, 0.0, 9, /*record_iterates=*/true);
    REQUIRE(res.objective_trace.size() == res.iterates.size());
    for (std::size_t i = 0; i < res.iterates.size(); ++i) {
        // recompute independently from the recorded factor pair
        const double recomputed =
            objective(x2, x1, res.iterates[i].first, res.iterates[i].second);
        CHECK(recomputed == doctest::Approx(res.objective_trace[i]).epsilon(1e-12));
        if (i > 0) CHECK(res.objective_trace[i] <= res.objective_trace[i - 1] + 1e-10);
    }
}

TEST_CASE("composite coefficient matrix has rank at most R") {
    const Eigen::MatrixXd x1 = random_matrix(10, 50, 31);
    const Eigen::MatrixXd x2 = random_matrix(10, 50, 32);
    const auto res = als(x2, x1, 4, 60, 1e-12, 13);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(res.w * res.v);
    int numerical_rank = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()[i] > 1e-8 * svd.singularValues()[0]) ++numerical_rank;
    CHECK(numerical_rank <= 4);
}

TEST_CASE("als is deterministic given the seed") {
    const Eigen::MatrixXd x1 = random_matrix(5, 20, 41);
    const Eigen::MatrixXd x2 = random_matrix(5, 20, 42);
    const auto a = als(x2, x1, 2, 30, 1e-12, 17);
    const auto b = als(x2, x1, 2, 30, 1e-12, 17);
    CHECK(a.objective_trace == b.objective_trace);
    CHECK((a.w - b.w).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("als input validation") {
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(4, 10);
    const Eigen::MatrixXd x2 = random_matrix(4, 10, 51);
    CHECK_THROWS_AS(als(x2, zero, 2, 10, 1e-10, 1), std::invalid_argument);
    const Eigen::MatrixXd x1 = random_matrix(4, 10, 52);
    CHECK_THROWS_AS(als(x2, x1, 0, 10, 1e-10, 1), std::invalid_argument);
    CHECK_THROWS_AS(als(random_matrix(4, 3, 53), random_matrix(4, 4, 54), 2, 10, 1e-10, 1),
                    std::invalid_argument);
}

TEST_CASE("identity coefficients reproduce the last week") {
    RvarModel model;
    model.rank = kHoursPerWeek;
    model.lag_order = 1;
    model.w = Eigen::MatrixXd::Identity(kHoursPerWeek, kHoursPerWeek);
    model.v = Eigen::MatrixXd::Identity(kHoursPerWeek, kHoursPerWeek);
    model.train_mean = Eigen::VectorXd::Constant(kHoursPerWeek, 5.0);
    const auto weeks = make_weeks(1);
    const auto fc = rvar_forecast(model, weeks);
    for (int j = 0; j < kHoursPerWeek; ++j)
        CHECK(fc.point[static_cast<std::size_t>(j)] ==
              doctest::Approx(weeks[0].values[static_cast<std::size_t>(j)]).epsilon(1e-12));
}

TEST_CASE("zero coefficients fall back to the training mean") {
    RvarModel model;
    model.rank = 1;
    model.lag_order = 1;
    model.w = Eigen::MatrixXd::Zero(kHoursPerWeek, 1);
    model.v = Eigen::MatrixXd::Zero(1, kHoursPerWeek);
    model.train_mean = Eigen::VectorXd::Constant(kHoursPerWeek, 7.25);
    const auto fc = rvar_forecast(model, make_weeks(1));
    for (double p : fc.point) CHECK(p == doctest::Approx(7.25));
}

TEST_CASE("forecast rejects masked context weeks") {
    RvarModel model;
    model.rank = 1;
    model.lag_order = 1;
    model.w = Eigen::MatrixXd::Zero(kHoursPerWeek, 1);
    model.v = Eigen::MatrixXd::Zero(1, kHoursPerWeek);
    model.train_mean = Eigen::VectorXd::Zero(kHoursPerWeek);
    auto weeks = make_weeks(1);
    weeks[0].fully_observed = false;
    CHECK_THROWS_AS(rvar_forecast(model, weeks), ContextError);
}
