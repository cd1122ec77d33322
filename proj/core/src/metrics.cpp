#include "hourcast/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hourcast {

namespace {

void check_lengths(std::size_t a, std::size_t b) {
    if (a != b) throw std::invalid_argument("metric: length mismatch");
    if (a == 0) throw std::invalid_argument("metric: empty input");
}

}  // namespace

double mae(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred.size(), actual.size());
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) s += std::abs(pred[i] - actual[i]);
    return s / static_cast<double>(pred.size());
}

double mse(std::span<const double> pred, std::span<const double> actual) {
    check_lengths(pred.size(), actual.size());
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - actual[i];
        s += d * d;
    }
    return s / static_cast<double>(pred.size());
}

MaskedMetric masked_mae(std::span<const double> pred, std::span<const double> actual,
                        std::span<const std::uint8_t> valid) {
    check_lengths(pred.size(), actual.size());
    check_lengths(pred.size(), valid.size());
    MaskedMetric m;
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!valid[i]) continue;
        s += std::abs(pred[i] - actual[i]);
        ++m.contributing;
    }
    m.value = m.contributing ? s / static_cast<double>(m.contributing) : 0.0;
    return m;
}

MaskedMetric masked_mse(std::span<const double> pred, std::span<const double> actual,
                        std::span<const std::uint8_t> valid) {
    check_lengths(pred.size(), actual.size());
    check_lengths(pred.size(), valid.size());
    MaskedMetric m;
    double s = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (!valid[i]) continue;
        const double d = pred[i] - actual[i];
        s += d * d;
        ++m.contributing;
    }
    m.value = m.contributing ? s / static_cast<double>(m.contributing) : 0.0;
    return m;
}

void ErrorAccumulator::add(double pred, double actual) {
    const double d = pred - actual;
    abs_sum_ += std::abs(d);
    sq_sum_ += d * d;
    ++n_;
}

double ErrorAccumulator::mae() const { return n_ ? abs_sum_ / static_cast<double>(n_) : 0.0; }

double ErrorAccumulator::mse() const { return n_ ? sq_sum_ / static_cast<double>(n_) : 0.0; }

}  // namespace hourcast
