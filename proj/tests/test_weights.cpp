#include <doctest.h>

#include <cmath>
#include <random>

#include "novas/error.hpp"
#include "novas/weights.hpp"

using namespace novas;

TEST_CASE("GE with c = 0 collapses to equal weights") {
    const auto w = build_weights(NovasVariant::GE, 0.2, Shape{0.0, 0.0, 0.0}, 4, Admissibility::ConstraintOnly);
    CHECK(w.a0 == doctest::Approx(0.16));
    REQUIRE(w.lags.size() == 4);
    for (double a : w.lags) CHECK(a == doctest::Approx(0.16));
    // 0.16 exceeds the trimming admissibility bound.
    try {
        build_weights(NovasVariant::GE, 0.2, Shape{0.0, 0.0, 0.0}, 4);
        FAIL("expected infeasibility");
    } catch (const InfeasibleWeights& e) {
        CHECK(e.kind() == Infeasibility::TrimBound);
    }
}

TEST_CASE("GA with a0 solved above 1/9 is rejected") {
    try {
        build_weights(NovasVariant::GA, 0.1, Shape{0.0, 0.3, 0.5}, 2);
        FAIL("expected infeasibility");
    } catch (const InfeasibleWeights& e) {
        CHECK(e.kind() == Infeasibility::TrimBound);
    }
    const auto w = build_weights(NovasVariant::GA, 0.1, Shape{0.0, 0.3, 0.5}, 2, Admissibility::ConstraintOnly);
    CHECK(w.lags[0] == doctest::Approx(0.3));
    CHECK(w.lags[1] == doctest::Approx(0.15));
    CHECK(w.a0 == doctest::Approx(0.225));
}

TEST_CASE("GA infeasibility kinds") {
    auto kind_of = [](NovasVariant v, double alpha, Shape s, std::size_t order) {
        try {
            build_weights(v, alpha, s, order);
        } catch (const InfeasibleWeights& e) {
            return e.kind();
        }
        FAIL("expected infeasibility");
        return Infeasibility::ShapeDomain;
    };
    CHECK(kind_of(NovasVariant::GA, 0.5, Shape{0.0, 0.4, 0.5}, 10) == Infeasibility::NegativeA0);
    CHECK(kind_of(NovasVariant::GA, 0.3, Shape{0.0, 0.3, 0.7}, 3) == Infeasibility::Dominance);
    CHECK(kind_of(NovasVariant::GA, 0.5, Shape{0.0, 0.1, 1.0}, 3) == Infeasibility::ShapeDomain);
    CHECK(kind_of(NovasVariant::GE, 1.0, Shape{0.5, 0.0, 0.0}, 3) == Infeasibility::ShapeDomain);
    CHECK_FALSE(try_build_weights(NovasVariant::GA, 0.5, Shape{0.0, 0.4, 0.5}, 10).has_value());
}

TEST_CASE("GE weights decay exponentially and satisfy the constraint") {
    const auto w = build_weights(NovasVariant::GE, 0.6, Shape{0.3, 0.0, 0.0}, 12);
    double expected_total = 0.0;
    for (int i = 0; i <= 12; ++i) expected_total += std::exp(-0.3 * i);
    const double cp = 0.4 / expected_total;
    CHECK(w.a0 == doctest::Approx(cp).epsilon(1e-14));
    for (std::size_t i = 0; i < w.lags.size(); ++i) {
        CHECK(w.lags[i] == doctest::Approx(cp * std::exp(-0.3 * static_cast<double>(i + 1))).epsilon(1e-13));
        if (i > 0) CHECK(w.lags[i] < w.lags[i - 1]);
    }
    CHECK(std::fabs(w.constraint_sum() - 1.0) < 1e-12);
    CHECK(w.trim_bound() == doctest::Approx(1.0 / std::sqrt(w.a0)));
}

TEST_CASE("no-a0 variants have zero a0 and no trimming bound") {
    const auto ge = build_weights(NovasVariant::GE_NO_A0, 0.5, Shape{0.2, 0.0, 0.0}, 8);
    CHECK(ge.a0 == 0.0);
    CHECK(std::isinf(ge.trim_bound()));
    CHECK(std::fabs(ge.alpha + [&] { double s = 0; for (double a : ge.lags) s += a; return s; }() - 1.0) < 1e-12);

    const auto ga = build_weights(NovasVariant::GA_NO_A0, 0.4, Shape{0.0, 0.9, 0.7}, 20);
    CHECK(ga.a0 == 0.0);
    CHECK(std::fabs(ga.constraint_sum() - 1.0) < 1e-12);
    CHECK(ga.lags[1] / ga.lags[0] == doctest::Approx(0.7));
}

TEST_CASE("random feasible weights satisfy the constraint to 1e-12") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto v : kAllVariants) {
        int accepted = 0;
        for (int trial = 0; trial < 200000 && accepted < 200; ++trial) {
            const double alpha = 0.05 + 0.9 * u(rng);
            const Shape s{5.0 * u(rng), u(rng), u(rng)};
            const auto order = static_cast<std::size_t>(1 + 40 * u(rng));
            const auto w = try_build_weights(v, alpha, s, order);
            if (!w) continue;
            ++accepted;
            CHECK(std::fabs(w->constraint_sum() - 1.0) < 1e-12);
            if (w->a0 > 0.0) CHECK(w->a0 <= kMaxA0);
            for (double a : w->lags) CHECK(a >= 0.0);
            if (v == NovasVariant::GA) {
                for (double a : w->lags) CHECK(w->effective_a0() >= a - 1e-14);
            }
        }
        CHECK(accepted == 200);
    }
}

TEST_CASE("variant names") {
    for (auto v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
    CHECK(parse_variant("ga-no-a0") == NovasVariant::GA_NO_A0);
    CHECK_THROWS_AS(parse_variant("GARCH"), InvalidInput);
}
