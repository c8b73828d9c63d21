#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace novas {

struct PriceSeries {
    std::vector<std::string> timestamps;  // opaque labels, file order
    std::vector<double> prices;
};

/// Percent log-returns, 100 * ln(P[t+1] / P[t]).
struct ReturnSeries {
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    std::span<const double> view() const noexcept { return values; }
};

/// Reads a headed CSV and returns the named price column. Any row whose price
/// is missing, non-numeric or nonpositive is an error naming that row.
PriceSeries load_price_csv(const std::string& path, const std::string& column = "close");

/// Reads a headed CSV holding returns directly (e.g. the `simulate` output).
ReturnSeries load_return_csv(const std::string& path, const std::string& column = "return");

ReturnSeries to_log_returns(const PriceSeries& p);

/// s^2_{t-1}: the variance of Y_1..Y_{t-1} centred on their own mean, divided
/// by t-1. `t` is 1-based, so the window holds the first t-1 observations and
/// must contain at least two points.
double running_variance(std::span<const double> y, std::size_t t);

/// Uncorrected moment ratio m4 / m2^2.
double sample_kurtosis(std::span<const double> w);

/// One-pass (Welford) accumulator for the centred variance with divisor n.
/// Used to extend s^2 recursively as new values arrive.
class RunningVariance {
public:
    void push(double x) noexcept {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    /// Returns 0 for fewer than two points.
    double variance() const noexcept {
        return count_ < 2 ? 0.0 : (m2_ > 0.0 ? m2_ / static_cast<double>(count_) : 0.0);
    }

private:
    std::size_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// s2[k] = variance of the first k observations (k = 0..n), the same quantity
/// as running_variance(y, k + 1) with s2[0] = s2[1] = 0.
std::vector<double> running_variance_path(std::span<const double> y);

}  // namespace novas
