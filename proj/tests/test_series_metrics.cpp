#include <doctest.h>

#include <stdexcept>

#include <random>

#include "hourcast/metrics.hpp"
#include "hourcast/series.hpp"

using namespace hourcast;

namespace {

const HourStamp kMonday{2004, 1, 5, 0};

HourlyCountSeries ramp_series(int hours, HourStamp start = kMonday) {
    std::vector<int> counts(static_cast<std::size_t>(hours));
    for (int i = 0; i < hours; ++i) counts[static_cast<std::size_t>(i)] = i % 23;
    return {start, std::move(counts)};
}

}  // namespace

TEST_CASE("slice_weeks basic shapes") {
    CHECK(slice_weeks(ramp_series(336)).size() == 2);
    CHECK(slice_weeks(ramp_series(169)).size() == 1);
    CHECK(slice_weeks(ramp_series(167)).empty());
    CHECK_THROWS_AS(slice_weeks(ramp_series(336, {2004, 1, 6, 0})), std::invalid_argument);
}

TEST_CASE("slice_weeks reproduces the input and flags masked weeks") {
    auto series = ramp_series(500);
    series.set_valid(200, false);
    const auto blocks = slice_weeks(series);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0].fully_observed);
    CHECK_FALSE(blocks[1].fully_observed);  // hour 200 sits in week 1
    // concatenation of block values plus the dropped tail equals the counts
    std::size_t k = 0;
    for (const auto& b : blocks)
        for (double v : b.values) CHECK(v == static_cast<double>(series.count_at(k++)));
    for (; k < series.size(); ++k) CHECK(series.count_at(k) == static_cast<int>(k % 23));
}

TEST_CASE("series invariants") {
    CHECK_THROWS_AS(HourlyCountSeries(kMonday, {1, -2, 3}), std::invalid_argument);
    CHECK_THROWS_AS(HourlyCountSeries(kMonday, {1, 2}, {1}), std::invalid_argument);
    const auto s = ramp_series(10);
    CHECK(s.index_of(add_hours(kMonday, 3)) == 3);
    CHECK_FALSE(s.index_of(add_hours(kMonday, 10)).has_value());
    CHECK(s.end() == add_hours(kMonday, 10));
}

TEST_CASE("mae and mse hand examples") {
    const std::vector<double> a{1, 2}, b{2, 4};
    CHECK(mae(a, b) == doctest::Approx(1.5));
    CHECK(mae(a, a) == 0.0);
    CHECK(mse(std::vector<double>{0}, std::vector<double>{2}) == doctest::Approx(4.0));
    CHECK(mse(b, b) == 0.0);
    CHECK_THROWS_AS(mae(a, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("metric symmetry and quadratic shift") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> value(-5.0, 25.0);
    std::vector<double> x(100), y(100);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = value(rng);
        y[i] = value(rng);
    }
    CHECK(mae(x, y) == doctest::Approx(mae(y, x)));
    CHECK(mae(x, y) >= 0.0);
    CHECK(mse(x, x) == 0.0);
    const double c = 2.75;
    std::vector<double> shifted(x);
    for (auto& v : shifted) v += c;
    CHECK(mse(x, shifted) == doctest::Approx(c * c));
    CHECK(mae(x, shifted) == doctest::Approx(c));
}

TEST_CASE("masked metrics skip invalid positions and report counts") {
    const std::vector<double> pred{1, 2, 3, 4};
    const std::vector<double> actual{2, 9, 3, 6};
    const std::vector<std::uint8_t> valid{1, 0, 1, 1};
    const auto m = masked_mae(pred, actual, valid);
    CHECK(m.contributing == 3);
    CHECK(m.value == doctest::Approx(1.0));  // (1 + 0 + 2)/3
    const auto q = masked_mse(pred, actual, valid);
    CHECK(q.contributing == 3);
    CHECK(q.value == doctest::Approx((1.0 + 0.0 + 4.0) / 3.0));
}

TEST_CASE("error accumulator equals whole-sequence metrics") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> value(0.0, 20.0);
    std::vector<double> p(64), a(64);
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = value(rng);
        a[i] = value(rng);
    }
    ErrorAccumulator acc;
    for (std::size_t i = 0; i < p.size(); ++i) acc.add(p[i], a[i]);
    CHECK(acc.mae() == doctest::Approx(mae(p, a)).epsilon(1e-12));
    CHECK(acc.mse() == doctest::Approx(mse(p, a)).epsilon(1e-12));
    CHECK(acc.n() == 64);
}

TEST_CASE("Gaussian1D log pdf") {
    const Gaussian1D g{0.0, 1.0};
    CHECK(g.log_pdf(0.0) == doctest::Approx(-0.9189385332046727));
    const Gaussian1D h{3.0, 4.0};
    CHECK(h.log_pdf(3.0) == doctest::Approx(-0.5 * std::log(2.0 * 3.141592653589793 * 4.0)));
}
