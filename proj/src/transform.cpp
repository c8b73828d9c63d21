#include "novas/transform.hpp"

#include <cmath>
#include <string>

#include "novas/error.hpp"
#include "novas/returns.hpp"

namespace novas {

std::vector<double> forward_transform(std::span<const double> y, const NovasWeights& w, double guard) {
    const auto s2_path = running_variance_path(y);
    return forward_transform(y, s2_path, w, guard);
}

std::vector<double> forward_transform(std::span<const double> y, std::span<const double> s2_path,
                                      const NovasWeights& w, double guard) {
    const std::size_t n = y.size();
    const std::size_t p = w.order;
    if (n <= p + 2) {
        throw InvalidInput("series of length " + std::to_string(n) + " too short for order " + std::to_string(p));
    }
    if (s2_path.size() < n) throw InvalidInput("variance path shorter than the series");
    const double a0_eff = w.effective_a0();
    std::vector<double> out;
    out.reserve(n - p);
    for (std::size_t k = p; k < n; ++k) {
        // k is 0-based, so Y_t = y[k] with t = k + 1 and s^2_{t-1} covers y[0..k).
        double den = w.alpha * s2_path[k] + a0_eff * y[k] * y[k];
        for (std::size_t i = 1; i <= p; ++i) den += w.lags[i - 1] * y[k - i] * y[k - i];
        if (!(den > guard)) {
            throw DegenerateInput("studentizing denominator vanishes at t = " + std::to_string(k + 1));
        }
        out.push_back(y[k] / std::sqrt(den));
    }
    return out;
}

double inverse_step(double w_next, std::span<const double> lagged_y2, double s2, const NovasWeights& w,
                    double guard) {
    if (lagged_y2.size() < w.order) throw InvalidInput("inverse_step needs `order` lagged squared returns");
    double scale = w.alpha * s2;
    for (std::size_t i = 0; i < w.order; ++i) scale += w.lags[i] * lagged_y2[i];
    const double w2 = w_next * w_next;
    switch (w.variant) {
        case NovasVariant::GE: {
            const double den = 1.0 - w.a0 * w2;
            if (!(den > guard)) {
                throw TrimBoundViolation("innovation " + std::to_string(w_next) + " outside the GE trimming bound");
            }
            return std::sqrt(w2 / den * scale);
        }
        case NovasVariant::GA: {
            const double one_minus_b1 = 1.0 - w.shape.b1;
            const double den = one_minus_b1 - w2 * w.a0;
            if (!(den > guard)) {
                throw TrimBoundViolation("innovation " + std::to_string(w_next) + " outside the GA trimming bound");
            }
            return std::sqrt(w2 * one_minus_b1 * scale / den);
        }
        case NovasVariant::GE_NO_A0:
        case NovasVariant::GA_NO_A0:
            return std::sqrt(w2 * scale);
    }
    return 0.0;
}

}  // namespace novas
