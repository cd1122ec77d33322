#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace hourcast {

/// Mean absolute error. Requires equal nonzero lengths.
double mae(std::span<const double> pred, std::span<const double> actual);

/// Mean squared error. Requires equal nonzero lengths.
double mse(std::span<const double> pred, std::span<const double> actual);

struct MaskedMetric {
    double value = 0.0;
    std::size_t contributing = 0;  // hours that entered the mean
};

/// Metrics that skip positions flagged invalid. Exposes how many hours
/// contributed so callers can assert masked hours never leak into scores.
MaskedMetric masked_mae(std::span<const double> pred, std::span<const double> actual,
                        std::span<const std::uint8_t> valid);
MaskedMetric masked_mse(std::span<const double> pred, std::span<const double> actual,
                        std::span<const std::uint8_t> valid);

/// Streaming accumulator used by the evaluation harness. Aggregating window
/// by window through this is identical to computing the metric over the
/// concatenation of all scored hours.
class ErrorAccumulator {
public:
    void add(double pred, double actual);
    std::size_t n() const { return n_; }
    double mae() const;
    double mse() const;

private:
    double abs_sum_ = 0.0;
    double sq_sum_ = 0.0;
    std::size_t n_ = 0;
};

}  // namespace hourcast
