#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "novas/returns.hpp"
#include "novas/rng.hpp"

namespace novas {

/// The eight data-generating processes: time-varying GARCH (M1, M2),
/// standard GARCH (M3, M4), GARCH with t(5) errors (M5), EGARCH (M6) and
/// GJR-GARCH (M7, M8).
enum class Model { M1 = 1, M2, M3, M4, M5, M6, M7, M8 };

std::string_view to_string(Model m) noexcept;
Model parse_model(std::string_view text);

enum class ErrorDist { GAUSSIAN, STUDENT_T };

struct ModelSpec {
    Model model = Model::M3;
    std::size_t n = 500;
    ErrorDist error = ErrorDist::GAUSSIAN;
    double df = 5.0;
    bool unit_variance_t = false;  // scale t draws by sqrt((df-2)/df)
    std::size_t burn_in = 500;
    Seed seed{};
    /// Overrides the model's default sigma^2 initial value.
    std::optional<double> sigma2_init;
};

/// Model defaults: t(5) errors for M5, Gaussian otherwise.
ModelSpec default_spec(Model model, std::size_t n, Seed seed);

struct VarianceCoefficients {
    double omega = 0.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
};

/// Coefficients of the time-varying models at g = t/n (also valid for the
/// constant-coefficient GARCH models).
VarianceCoefficients garch_coefficients(Model model, double g);

/// Default starting variance: unconditional variance where one exists, 1e-4
/// for the time-varying models.
double default_sigma2_init(Model model);

struct SimulatedPath {
    std::vector<double> x;       // returns X_t
    std::vector<double> sigma2;  // conditional variances
    std::vector<double> eps;     // innovations
};

SimulatedPath generate_path(const ModelSpec& spec);
ReturnSeries generate(const ModelSpec& spec);

}  // namespace novas
