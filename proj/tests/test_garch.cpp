#include <doctest.h>

#include <cmath>
#include <random>

#include "novas/error.hpp"
#include "novas/garch.hpp"
#include "novas/simgen.hpp"

using namespace novas;

namespace {

// Gaussian log-likelihood written straight from the definition.
double slow_loglik(const std::vector<double>& y, double omega, double a1, double b1) {
    const double n = static_cast<double>(y.size());
    double mu = 0.0;
    for (double v : y) mu += v;
    mu /= n;
    double s2 = 0.0;
    for (double v : y) s2 += (v - mu) * (v - mu);
    s2 /= n;
    const double pi = std::acos(-1.0);
    double ll = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (t > 0) s2 = omega + a1 * y[t - 1] * y[t - 1] + b1 * s2;
        ll += -0.5 * (std::log(2.0 * pi) + std::log(s2) + y[t] * y[t] / s2);
    }
    return ll;
}

GarchFit manual_fit(GarchParams p, std::vector<double> sigma2) {
    GarchFit fit;
    fit.params = p;
    fit.sigma2_path = std::move(sigma2);
    fit.n = fit.sigma2_path.size();
    return fit;
}

}  // namespace

TEST_CASE("likelihood matches a definition-level implementation") {
    const auto y = generate(default_spec(Model::M3, 400, Seed{1})).values;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        const double a1 = 0.3 * u(rng);
        const double b1 = (0.99 - a1) * u(rng);
        const GarchParams p{1e-6 + 1e-4 * u(rng), a1, b1};
        CHECK(garch_loglik(y, p) == doctest::Approx(slow_loglik(y, p.omega, p.alpha1, p.beta1)).epsilon(1e-8));
    }
}

TEST_CASE("variance path starts at the sample variance") {
    const std::vector<double> y{1.0, -1.0, 3.0, -3.0};
    const auto s2 = garch_variance_path(y, GarchParams{0.1, 0.2, 0.5});
    REQUIRE(s2.size() == 4);
    CHECK(s2[0] == doctest::Approx(5.0));
    CHECK(s2[1] == doctest::Approx(0.1 + 0.2 * 1.0 + 0.5 * 5.0));
}

TEST_CASE("direct forecast recursion") {
    const auto fit = manual_fit({1e-5, 0.1, 0.73}, {2.0, 1.0});
    const auto f = garch_direct_forecast(fit, 1.0, 2);
    REQUIRE(f.size() == 2);
    CHECK(f[0] == doctest::Approx(0.83001).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(0.6889183).epsilon(1e-12));

    const auto flat = garch_direct_forecast(manual_fit({0.3, 0.0, 0.0}, {1.0, 4.0}), 9.0, 5);
    for (double v : flat) CHECK(v == doctest::Approx(0.3));

    const auto fit2 = manual_fit({0.02, 0.1, 0.8}, {1.0, 0.05});
    const auto path = garch_direct_forecast(fit2, 0.01, 400);
    const double target = 0.02 / (1.0 - 0.9);
    for (std::size_t k = 1; k < path.size(); ++k) {
        CHECK(path[k] >= path[k - 1]);
        CHECK(path[k] <= target);
    }
    CHECK(path.back() == doctest::Approx(target).epsilon(1e-9));
}

TEST_CASE("nelder-mead minimizes a smooth valley") {
    const auto f = [](std::span<const double> x) {
        return 100.0 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1.0 - x[0]) * (1.0 - x[0]);
    };
    SimplexOptions opt;
    opt.max_evaluations = 20000;
    const auto r = nelder_mead(f, {-1.2, 1.0}, opt);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.x[1] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(r.converged);
}

TEST_CASE("MLE recovers Model-3 parameters") {
    const auto y = generate(default_spec(Model::M3, 5000, Seed{10})).values;
    const auto fit = fit_garch11_mle(y);
    CHECK(std::fabs(fit.params.alpha1 - 0.1) < 0.05);
    CHECK(std::fabs(fit.params.beta1 - 0.73) < 0.05);
    CHECK(fit.params.alpha1 + fit.params.beta1 < 1.0);
    CHECK(fit.params.omega > 0.0);
    CHECK(fit.sigma2_path.size() == y.size());
    for (double s : fit.sigma2_path) CHECK(s > 0.0);
    REQUIRE(fit.start_logliks.size() == 5);
    for (double ll : fit.start_logliks) CHECK(fit.loglik >= ll);
    CHECK(fit.loglik == doctest::Approx(garch_loglik(y, fit.params)).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
    CHECK_THROWS_AS(fit_garch11_mle(std::vector<double>(29, 1.0)), InvalidInput);
    CHECK_THROWS_AS(fit_garch11_mle(std::vector<double>(100, 0.5)), DegenerateInput);
}

TEST_CASE("bootstrap forecast") {
    const auto y = generate(default_spec(Model::M3, 500, Seed{3})).values;
    const auto fit = fit_garch11_mle(y);
    const auto r = garch_bootstrap_forecast(fit, 1, 20000, Risk::L2, Seed{1});
    double mean_s2 = 0.0;
    for (double s : fit.sigma2_path) mean_s2 += s;
    mean_s2 /= static_cast<double>(fit.sigma2_path.size());
    CHECK(std::fabs(r.point / mean_s2 - 1.0) < 0.03);

    const auto again = garch_bootstrap_forecast(fit, 1, 20000, Risk::L2, Seed{1});
    CHECK(again.point == r.point);
    const auto other = garch_bootstrap_forecast(fit, 1, 5000, Risk::L2, Seed{2});
    const auto base = garch_bootstrap_forecast(fit, 1, 5000, Risk::L2, Seed{1});
    CHECK(std::fabs(other.point / base.point - 1.0) < 0.05);

    const auto l1 = garch_bootstrap_forecast(fit, 5, 1000, Risk::L1, Seed{1});
    CHECK(l1.point == l1.ensemble_median);
}

TEST_CASE("constant fitted variance leaves only innovation spread") {
    const auto fit = manual_fit({0.1, 0.0, 0.0}, std::vector<double>(50, 2.0));
    const auto ens = garch_bootstrap_ensemble(fit, 3, 4000, Seed{6});
    double sum = 0.0;
    for (double v : ens.y2) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum / static_cast<double>(ens.y2.size()) == doctest::Approx(2.0).epsilon(0.05));
}
