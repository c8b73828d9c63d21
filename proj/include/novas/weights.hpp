#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace novas {

enum class NovasVariant { GE, GE_NO_A0, GA, GA_NO_A0 };

inline constexpr NovasVariant kAllVariants[] = {
    NovasVariant::GE, NovasVariant::GE_NO_A0, NovasVariant::GA, NovasVariant::GA_NO_A0};

std::string_view to_string(NovasVariant v) noexcept;
NovasVariant parse_variant(std::string_view text);

constexpr bool is_ga_family(NovasVariant v) noexcept {
    return v == NovasVariant::GA || v == NovasVariant::GA_NO_A0;
}
constexpr bool has_a0(NovasVariant v) noexcept {
    return v == NovasVariant::GE || v == NovasVariant::GA;
}

/// Variant-specific free parameters. GE-family reads `c`; GA-family reads
/// `a1` and `b1`. For GA_NO_A0 the supplied `a1` is ignored and re-solved so
/// that alpha + sum(lags) = 1.
struct Shape {
    double c = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
};

/// Upper bound on the effective Y_t^2 coefficient: a trimming bound of at
/// least 3 standard deviations.
inline constexpr double kMaxA0 = 1.0 / 9.0;

struct NovasWeights {
    NovasVariant variant = NovasVariant::GE;
    double alpha = 0.0;
    double a0 = 0.0;              // 0 for the *_NO_A0 variants
    std::vector<double> lags;     // a_1..a_order, newest lag first
    std::size_t order = 0;
    Shape shape;

    /// Coefficient of Y_t^2 inside the studentizing denominator: a0 for GE,
    /// a0 / (1 - b1) for GA.
    double effective_a0() const noexcept;

    /// |W| <= trim_bound() holds for every forward residual; infinite when
    /// there is no contemporaneous term.
    double trim_bound() const noexcept;

    /// Left-hand side of the variance-stabilizing constraint (should be 1).
    double constraint_sum() const noexcept;
};

/// Strict also rejects an effective a0 above 1/9; ConstraintOnly checks the
/// sum and sign constraints alone (e.g. to inspect Generalized Simple weights).
enum class Admissibility { Strict, ConstraintOnly };

/// Throws InfeasibleWeights naming the broken constraint.
NovasWeights build_weights(NovasVariant variant, double alpha, const Shape& shape, std::size_t order,
                           Admissibility admissibility = Admissibility::Strict);

/// Same as build_weights but returns nullopt on infeasibility instead of
/// throwing; calibration uses this in its inner loop.
std::optional<NovasWeights> try_build_weights(NovasVariant variant, double alpha, const Shape& shape,
                                              std::size_t order,
                                              Admissibility admissibility = Admissibility::Strict);

}  // namespace novas
