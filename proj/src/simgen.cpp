#include "novas/simgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "novas/error.hpp"

namespace novas {

std::string_view to_string(Model m) noexcept {
    switch (m) {
        case Model::M1: return "M1";
        case Model::M2: return "M2";
        case Model::M3: return "M3";
        case Model::M4: return "M4";
        case Model::M5: return "M5";
        case Model::M6: return "M6";
        case Model::M7: return "M7";
        case Model::M8: return "M8";
    }
    return "?";
}

Model parse_model(std::string_view text) {
    if (text.size() == 2 && (text[0] == 'M' || text[0] == 'm') && text[1] >= '1' && text[1] <= '8') {
        return static_cast<Model>(text[1] - '0');
    }
    throw InvalidInput("unknown model '" + std::string(text) + "' (expected M1..M8)");
}

ModelSpec default_spec(Model model, std::size_t n, Seed seed) {
    ModelSpec spec;
    spec.model = model;
    spec.n = n;
    spec.seed = seed;
    spec.error = model == Model::M5 ? ErrorDist::STUDENT_T : ErrorDist::GAUSSIAN;
    return spec;
}

VarianceCoefficients garch_coefficients(Model model, double g) {
    constexpr double half_pi = 0.5 * std::numbers::pi;
    switch (model) {
        case Model::M1:
            return {-4.0 * std::sin(half_pi * g) + 5.0, -(g - 0.3) * (g - 0.3) + 0.5, 0.2 * std::sin(half_pi * g) + 0.2};
        case Model::M2: return {1e-5, 0.1 - 0.05 * g, 0.73 + 0.2 * g};
        case Model::M3:
        case Model::M5: return {1e-5, 0.1, 0.73};
        case Model::M4: return {1e-5, 0.1, 0.8895};
        case Model::M6: return {1e-5, 0.1, 0.8895};  // EGARCH: (omega, sign coefficient, persistence)
        case Model::M7: return {1e-5, 0.5, 0.5};
        case Model::M8: return {1e-5, 0.1, 0.73};
    }
    return {};
}

double default_sigma2_init(Model model) {
    switch (model) {
        case Model::M1:
        case Model::M2: return 1e-4;
        case Model::M3: return 1e-5 / (1.0 - 0.1 - 0.73);
        case Model::M4: return 1e-5 / (1.0 - 0.1 - 0.8895);
        case Model::M5: return 1e-5 / (1.0 - 0.1 * 5.0 / 3.0 - 0.73);  // raw t(5) has variance 5/3
        case Model::M6: return std::exp(1e-5 / (1.0 - 0.8895));
        case Model::M7: return 1e-5 / (1.0 - 0.5 - 0.25);   // effective ARCH weight 0.5 - 0.5/2
        case Model::M8: return 1e-5 / (1.0 - 0.73 - 0.25);  // effective ARCH weight 0.1 + 0.3/2
    }
    return 1e-4;
}

SimulatedPath generate_path(const ModelSpec& spec) {
    if (spec.n == 0) throw InvalidInput("simulation length must be positive");
    if (spec.error == ErrorDist::STUDENT_T && !(spec.df > 2.0)) {
        throw InvalidInput("Student-t degrees of freedom must exceed 2");
    }
    Rng rng = make_rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::student_t_distribution<double> student(spec.error == ErrorDist::STUDENT_T ? spec.df : 5.0);
    const double t_scale = spec.unit_variance_t ? std::sqrt((spec.df - 2.0) / spec.df) : 1.0;
    auto draw = [&] { return spec.error == ErrorDist::STUDENT_T ? t_scale * student(rng) : normal(rng); };

    const std::size_t total = spec.burn_in + spec.n;
    const double n = static_cast<double>(spec.n);
    const double abs_mean = std::sqrt(2.0 / std::numbers::pi);

    SimulatedPath path;
    path.x.reserve(spec.n);
    path.sigma2.reserve(spec.n);
    path.eps.reserve(spec.n);

    double sigma2 = spec.sigma2_init.value_or(default_sigma2_init(spec.model));
    double prev_x = 0.0;
    double prev_eps = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        // burn-in holds the coefficients at the first delivered g = 1/n
        const double g = i < spec.burn_in ? 1.0 / n : static_cast<double>(i - spec.burn_in + 1) / n;
        if (i > 0) {
            const auto c = garch_coefficients(spec.model, g);
            switch (spec.model) {
                case Model::M6:
                    sigma2 = std::exp(c.omega + c.beta1 * std::log(sigma2) + c.alpha1 * prev_eps +
                                      0.3 * (std::abs(prev_eps) - abs_mean));
                    break;
                case Model::M7:
                case Model::M8: {
                    const double indicator = prev_x <= 0.0 ? 1.0 : 0.0;
                    const double leverage = spec.model == Model::M7 ? -0.5 : 0.3;
                    sigma2 = c.omega + c.beta1 * sigma2 + (c.alpha1 + leverage * indicator) * prev_x * prev_x;
                    break;
                }
                default:
                    sigma2 = c.omega + c.beta1 * sigma2 + c.alpha1 * prev_x * prev_x;
                    break;
            }
        }
        const double eps = draw();
        const double x = std::sqrt(sigma2) * eps;
        if (i >= spec.burn_in) {
            path.x.push_back(x);
            path.sigma2.push_back(sigma2);
            path.eps.push_back(eps);
        }
        prev_x = x;
        prev_eps = eps;
    }
    return path;
}

ReturnSeries generate(const ModelSpec& spec) { return ReturnSeries{generate_path(spec).x}; }

}  // namespace novas
