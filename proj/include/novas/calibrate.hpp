#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "novas/returns.hpp"
#include "novas/weights.hpp"

namespace novas {

/// Search space for kurtosis-targeted calibration.
struct CalibrationGrid {
    double ga_step = 0.02;          // a1 and b1 grid spacing over (0, 1)
    std::size_t ge_c_count = 40;    // log-spaced c values
    double ge_c_min = 0.005;
    double ge_c_max = 5.0;
    double tail_mass = 0.01;        // GE order: smallest p with tail mass below this
    std::size_t order_cap = 30;     // hard cap on p and q
    std::size_t window_divisor = 5; // order <= floor(n / window_divisor)
    std::size_t order_max = 60;     // GE escalation ceiling
    double guard = 1e-12;           // inverse-transform denominator guard

    /// Order cap for a sample of length n: min(order_cap, floor(n / divisor)).
    std::size_t effective_cap(std::size_t n) const;

    std::vector<double> ge_c_values() const;
    /// step, 2*step, ... strictly below 1.
    std::vector<double> ga_values() const;

    /// Reads `key = value` lines ('#' comments). Unknown keys are an error.
    static CalibrationGrid from_file(const std::string& path);
};

/// Smallest p >= 1 with sum_{i>p} e^{-ci} / sum_{i>=0} e^{-ci} < tail_mass,
/// capped at `cap`. Returns `cap` for c == 0.
std::size_t ge_adaptive_order(double c, double tail_mass, std::size_t cap);

struct CalibratedTransform {
    NovasWeights weights;
    std::vector<double> residuals;  // W_t, t = order+1..n
    ReturnSeries history;           // the Y_1..Y_n calibrated on
    double s2_n = 0.0;              // variance of the full history
    double objective = 0.0;         // |KURT(W) - 3|
    std::size_t evaluated_points = 0;
    std::size_t feasible_points = 0;

    NovasVariant variant() const noexcept { return weights.variant; }
};

/// Minimum sample size accepted by calibrate().
inline constexpr std::size_t kMinCalibrationLength = 50;

/// One candidate point of a variant's grid at a given order cap, in the
/// deterministic enumeration order used by calibrate().
struct GridPoint {
    Shape shape;
    std::size_t order = 0;
};

std::vector<GridPoint> enumerate_grid(NovasVariant variant, const CalibrationGrid& grid, std::size_t cap);

/// Exhaustive grid search for the weights minimizing |KURT(W) - 3| at fixed
/// alpha. For GE-family grids with no feasible point the order cap doubles
/// (up to grid.order_max) before giving up.
CalibratedTransform calibrate(NovasVariant variant, double alpha, const ReturnSeries& y,
                              const CalibrationGrid& grid = {});

/// Re-applies known weights to a series (no search).
CalibratedTransform fit_transform(const NovasWeights& weights, const ReturnSeries& y, double guard = 1e-12);

}  // namespace novas
