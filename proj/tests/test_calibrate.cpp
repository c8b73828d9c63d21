#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "novas/calibrate.hpp"
#include "novas/error.hpp"
#include "novas/returns.hpp"
#include "novas/simgen.hpp"
#include "oracle.hpp"

using namespace novas;

namespace {

ReturnSeries garch_data(std::uint64_t seed, std::size_t n = 300) {
    return generate(default_spec(Model::M3, n, Seed{seed}));
}

ReturnSeries gaussian_data(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01;
    ReturnSeries y;
    y.values.resize(n);
    for (double& v : y.values) v = n01(rng);
    return y;
}

}  // namespace

TEST_CASE("grid helpers") {
    CalibrationGrid g;
    CHECK(g.effective_cap(500) == 30);
    CHECK(g.effective_cap(100) == 20);
    CHECK(g.effective_cap(3) == 1);
    const auto cs = g.ge_c_values();
    REQUIRE(cs.size() == 40);
    CHECK(cs.front() == doctest::Approx(0.005));
    CHECK(cs.back() == doctest::Approx(5.0));
    const auto ga = g.ga_values();
    REQUIRE(ga.size() == 49);
    CHECK(ga.back() == doctest::Approx(0.98));

    CHECK(ge_adaptive_order(0.0, 0.01, 30) == 30);
    // e^{-c(p+1)} < 0.01 with c = 1: p + 1 > 4.6, so p = 4.
    CHECK(ge_adaptive_order(1.0, 0.01, 30) == 4);
    CHECK(ge_adaptive_order(5.0, 0.01, 30) == 1);
    CHECK(ge_adaptive_order(0.01, 0.01, 30) == 30);
}

TEST_CASE("grid config file") {
    const auto path = (std::filesystem::temp_directory_path() / "novas_grid.cfg").string();
    std::ofstream(path) << "# coarse\nga_step = 0.05\norder_cap=12\n\nguard = 1e-10\n";
    const auto g = CalibrationGrid::from_file(path);
    CHECK(g.ga_step == 0.05);
    CHECK(g.order_cap == 12);
    CHECK(g.guard == 1e-10);
    CHECK(g.ge_c_count == 40);
    std::ofstream(path) << "gridstep = 0.1\n";
    CHECK_THROWS_AS(CalibrationGrid::from_file(path), InvalidInput);
}

TEST_CASE("calibration matches an exhaustive oracle") {
    const auto y = garch_data(17);
    CalibrationGrid grid;
    grid.ga_step = 0.05;
    const std::size_t cap = grid.effective_cap(y.size());
    for (double alpha : {0.4, 0.6}) {
        const auto ge = calibrate(NovasVariant::GE, alpha, y, grid);
        const auto ge_ref = oracle::search_ge(y.values, alpha, true, grid.ge_c_count, grid.ge_c_min, grid.ge_c_max,
                                              grid.tail_mass, cap);
        REQUIRE(ge_ref.found);
        CHECK(ge.objective == doctest::Approx(ge_ref.objective).epsilon(1e-9));
        CHECK(ge.weights.shape.c == doctest::Approx(ge_ref.c).epsilon(1e-12));
        CHECK(ge.weights.order == ge_ref.order);

        const auto gn = calibrate(NovasVariant::GE_NO_A0, alpha, y, grid);
        const auto gn_ref = oracle::search_ge(y.values, alpha, false, grid.ge_c_count, grid.ge_c_min, grid.ge_c_max,
                                              grid.tail_mass, cap);
        CHECK(gn.objective == doctest::Approx(gn_ref.objective).epsilon(1e-9));
        CHECK(gn.weights.shape.c == doctest::Approx(gn_ref.c).epsilon(1e-12));

        const auto an = calibrate(NovasVariant::GA_NO_A0, alpha, y, grid);
        const auto an_ref = oracle::search_ga_no_a0(y.values, alpha, grid.ga_step, cap);
        CHECK(an.objective == doctest::Approx(an_ref.objective).epsilon(1e-9));
        CHECK(an.weights.shape.b1 == doctest::Approx(an_ref.b1).epsilon(1e-12));
    }
    const auto ga = calibrate(NovasVariant::GA, 0.6, y, grid);
    const auto ga_ref = oracle::search_ga(y.values, 0.6, grid.ga_step, cap);
    REQUIRE(ga_ref.found);
    CHECK(ga.objective == doctest::Approx(ga_ref.objective).epsilon(1e-9));
    CHECK(ga.weights.shape.a1 == doctest::Approx(ga_ref.a1).epsilon(1e-12));
    CHECK(ga.weights.shape.b1 == doctest::Approx(ga_ref.b1).epsilon(1e-12));
}

TEST_CASE("calibrated transforms satisfy their invariants") {
    const auto y = garch_data(4);
    for (auto v : kAllVariants) {
        const auto ct = calibrate(v, 0.7, y);
        CHECK(std::fabs(ct.weights.constraint_sum() - 1.0) < 1e-12);
        CHECK(ct.residuals.size() == y.size() - ct.weights.order);
        CHECK(ct.history.values == y.values);
        CHECK(ct.s2_n == doctest::Approx(oracle::centred_variance(y.values, y.size())));
        CHECK(ct.objective == doctest::Approx(std::fabs(oracle::kurtosis(ct.residuals) - 3.0)));
        CHECK(ct.feasible_points > 0);
        CHECK(ct.feasible_points <= ct.evaluated_points);
        if (ct.weights.a0 > 0.0) {
            CHECK(ct.weights.a0 <= kMaxA0);
            for (double w : ct.residuals) CHECK(std::fabs(w) <= 1.0 / std::sqrt(ct.weights.a0));
        }
    }
}

TEST_CASE("calibration is deterministic") {
    const auto y = garch_data(9);
    for (auto v : kAllVariants) {
        const auto a = calibrate(v, 0.5, y);
        const auto b = calibrate(v, 0.5, y);
        CHECK(a.residuals == b.residuals);
        CHECK(a.weights.lags == b.weights.lags);
        CHECK(a.objective == b.objective);
    }
}

TEST_CASE("calibrated objective is the minimum over every feasible grid point") {
    const auto y = gaussian_data(3, 300);
    CalibrationGrid grid;
    grid.ga_step = 0.05;
    for (auto v : kAllVariants) {
        const auto ct = calibrate(v, 0.7, y, grid);
        std::size_t feasible = 0;
        for (const auto& point : enumerate_grid(v, grid, grid.effective_cap(y.size()))) {
            const auto w = try_build_weights(v, 0.7, point.shape, point.order);
            if (!w) continue;
            ++feasible;
            CHECK(ct.objective <= fit_transform(*w, y).objective);
        }
        CHECK(feasible == ct.feasible_points);
    }
}

TEST_CASE("GE order escalates when every point is a0-infeasible") {
    const auto y = garch_data(2);
    CalibrationGrid grid;
    grid.order_cap = 2;
    const auto ct = calibrate(NovasVariant::GE, 0.5, y, grid);
    CHECK(ct.weights.order > 2);
    CHECK(ct.weights.a0 <= kMaxA0);

    grid.order_max = 2;
    CHECK_THROWS_AS(calibrate(NovasVariant::GE, 0.5, y, grid), CalibrationFailure);
}

TEST_CASE("calibration preconditions") {
    CHECK_THROWS_AS(calibrate(NovasVariant::GE, 0.5, gaussian_data(1, 49)), InvalidInput);
    ReturnSeries flat;
    flat.values.assign(100, 0.25);
    CHECK_THROWS_AS(calibrate(NovasVariant::GE, 0.5, flat), DegenerateInput);
    CHECK_THROWS_AS(calibrate(NovasVariant::GE, 1.0, gaussian_data(1, 100)), InvalidInput);
}

TEST_CASE("fit_transform reapplies known weights") {
    const auto y = garch_data(21);
    const auto ct = calibrate(NovasVariant::GA_NO_A0, 0.5, y);
    const auto again = fit_transform(ct.weights, y);
    CHECK(again.residuals == ct.residuals);
    CHECK(again.objective == ct.objective);
}
