#include "novas/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "novas/error.hpp"

namespace novas {

namespace {

// Slack for comparisons against constraint boundaries, so values that equal a
// bound up to rounding are admitted.
constexpr double kSlack = 1e-14;

struct Outcome {
    std::optional<NovasWeights> weights;
    Infeasibility kind = Infeasibility::ShapeDomain;
    std::string message;
};

Outcome fail(Infeasibility kind, std::string message) { return Outcome{std::nullopt, kind, std::move(message)}; }

Outcome construct(NovasVariant variant, double alpha, const Shape& shape, std::size_t order,
                  Admissibility admissibility) {
    if (!(alpha > 0.0 && alpha < 1.0)) return fail(Infeasibility::ShapeDomain, "alpha must lie in (0, 1)");
    if (order == 0) return fail(Infeasibility::ShapeDomain, "order must be positive");

    NovasWeights w;
    w.variant = variant;
    w.alpha = alpha;
    w.order = order;
    w.shape = shape;
    w.lags.resize(order);

    if (!is_ga_family(variant)) {
        if (!(shape.c >= 0.0) || !std::isfinite(shape.c)) return fail(Infeasibility::ShapeDomain, "c must be >= 0");
        const bool with_a0 = variant == NovasVariant::GE;
        double total = 0.0;
        for (std::size_t i = with_a0 ? 0 : 1; i <= order; ++i) total += std::exp(-shape.c * static_cast<double>(i));
        const double scale = (1.0 - alpha) / total;
        w.a0 = with_a0 ? scale : 0.0;
        for (std::size_t i = 1; i <= order; ++i) w.lags[i - 1] = scale * std::exp(-shape.c * static_cast<double>(i));
    } else {
        if (!(shape.b1 > 0.0 && shape.b1 < 1.0)) return fail(Infeasibility::ShapeDomain, "b1 must lie in (0, 1)");
        double geometric = 0.0;  // sum_{i=1}^{q} b1^{i-1}
        double power = 1.0;
        for (std::size_t i = 0; i < order; ++i) {
            geometric += power;
            power *= shape.b1;
        }
        double a1 = shape.a1;
        if (variant == NovasVariant::GA_NO_A0) {
            a1 = (1.0 - alpha) / geometric;
            w.shape.a1 = a1;
        } else if (!(a1 > 0.0 && a1 < 1.0)) {
            return fail(Infeasibility::ShapeDomain, "a1 must lie in (0, 1)");
        }
        power = 1.0;
        double lag_sum = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
            w.lags[i] = a1 * power;
            lag_sum += w.lags[i];
            power *= shape.b1;
        }
        if (variant == NovasVariant::GA) {
            double a0_eff = 1.0 - alpha - lag_sum;
            if (a0_eff < -kSlack) {
                return fail(Infeasibility::NegativeA0, "lag mass " + std::to_string(lag_sum) + " exceeds 1 - alpha");
            }
            a0_eff = std::max(a0_eff, 0.0);
            if (admissibility == Admissibility::Strict && a0_eff > kMaxA0 + kSlack) {
                return fail(Infeasibility::TrimBound,
                            "a0/(1-b1) = " + std::to_string(a0_eff) + " exceeds 1/9 (trimming bound below 3)");
            }
            if (a0_eff + kSlack < a1) {
                return fail(Infeasibility::Dominance,
                            "a0/(1-b1) = " + std::to_string(a0_eff) + " is smaller than a1 = " + std::to_string(a1));
            }
            w.a0 = a0_eff * (1.0 - shape.b1);
        } else {
            w.a0 = 0.0;
        }
    }

    if (variant == NovasVariant::GE && admissibility == Admissibility::Strict && w.a0 > kMaxA0 + kSlack) {
        return fail(Infeasibility::TrimBound, "a0 = " + std::to_string(w.a0) + " exceeds 1/9 (trimming bound below 3)");
    }
    return Outcome{std::move(w), Infeasibility::ShapeDomain, {}};
}

}  // namespace

std::string_view to_string(NovasVariant v) noexcept {
    switch (v) {
        case NovasVariant::GE: return "GE";
        case NovasVariant::GE_NO_A0: return "GE_NO_A0";
        case NovasVariant::GA: return "GA";
        case NovasVariant::GA_NO_A0: return "GA_NO_A0";
    }
    return "?";
}

NovasVariant parse_variant(std::string_view text) {
    for (auto v : kAllVariants) {
        if (text == to_string(v)) return v;
    }
    if (text == "ge") return NovasVariant::GE;
    if (text == "ge-no-a0") return NovasVariant::GE_NO_A0;
    if (text == "ga") return NovasVariant::GA;
    if (text == "ga-no-a0") return NovasVariant::GA_NO_A0;
    throw InvalidInput("unknown NoVaS variant '" + std::string(text) + "'");
}

double NovasWeights::effective_a0() const noexcept {
    if (variant == NovasVariant::GA) return a0 / (1.0 - shape.b1);
    return a0;
}

double NovasWeights::trim_bound() const noexcept {
    const double e = effective_a0();
    return e > 0.0 ? 1.0 / std::sqrt(e) : std::numeric_limits<double>::infinity();
}

double NovasWeights::constraint_sum() const noexcept {
    double total = alpha + effective_a0();
    for (double a : lags) total += a;
    return total;
}

NovasWeights build_weights(NovasVariant variant, double alpha, const Shape& shape, std::size_t order,
                           Admissibility admissibility) {
    Outcome out = construct(variant, alpha, shape, order, admissibility);
    if (!out.weights) throw InfeasibleWeights(out.kind, std::string(to_string(variant)) + ": " + out.message);
    return std::move(*out.weights);
}

std::optional<NovasWeights> try_build_weights(NovasVariant variant, double alpha, const Shape& shape,
                                              std::size_t order, Admissibility admissibility) {
    return construct(variant, alpha, shape, order, admissibility).weights;
}

}  // namespace novas
