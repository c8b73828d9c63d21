#pragma once

#include <span>
#include <vector>

#include "novas/weights.hpp"

namespace novas {

/// Default guard on inverse-transform denominators.
inline constexpr double kDefaultGuard = 1e-12;

/// Studentized residuals W_t for t = order+1..n (returned 0-based, length
/// n - order). s^2_{t-1} is the centred variance of Y_1..Y_{t-1}.
std::vector<double> forward_transform(std::span<const double> y, const NovasWeights& w,
                                      double guard = kDefaultGuard);

/// Same as forward_transform with the running variance path supplied by the
/// caller (s2_path[k] = variance of the first k observations).
std::vector<double> forward_transform(std::span<const double> y, std::span<const double> s2_path,
                                      const NovasWeights& w, double guard = kDefaultGuard);

/// Next |Y| from an innovation, the most recent `order` squared returns
/// (newest first) and the current variance estimate.
double inverse_step(double w_next, std::span<const double> lagged_y2, double s2, const NovasWeights& w,
                    double guard = kDefaultGuard);

}  // namespace novas
