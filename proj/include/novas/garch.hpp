#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "novas/predictor.hpp"
#include "novas/rng.hpp"

namespace novas {

struct GarchParams {
    double omega = 0.0;
    double alpha1 = 0.0;
    double beta1 = 0.0;
};

struct GarchFit {
    GarchParams params;
    std::vector<double> sigma2_path;  // sigma^2_t, t = 1..n
    double loglik = 0.0;
    std::size_t n = 0;
    std::vector<double> start_logliks;  // log-likelihood at each multi-start point
};

inline constexpr std::size_t kMinGarchLength = 30;

/// sigma^2_1 = sample variance (mean-centred, divisor n); sigma^2_t =
/// omega + alpha1 Y_{t-1}^2 + beta1 sigma^2_{t-1}.
std::vector<double> garch_variance_path(std::span<const double> y, const GarchParams& p);

/// Gaussian conditional log-likelihood including the first observation.
double garch_loglik(std::span<const double> y, const GarchParams& p);

GarchFit fit_garch11_mle(std::span<const double> y);

/// Squared-return forecasts for steps 1..h from the end of the fitted sample.
std::vector<double> garch_direct_forecast(const GarchFit& fit, double last_y2, std::size_t h);

/// Bootstrap of fitted volatilities: each step draws sigma* from {sigma_t}
/// and a fresh N(0,1) w, giving a pseudo squared return sigma*^2 w^2.
SquaredEnsemble garch_bootstrap_ensemble(const GarchFit& fit, std::size_t h, std::size_t paths, Seed seed);

ForecastResult garch_bootstrap_forecast(const GarchFit& fit, std::size_t h, std::size_t paths, Risk risk,
                                        Seed seed, Statistic statistic = Statistic::AGGREGATED_SQUARED);

struct SimplexOptions {
    std::size_t max_evaluations = 4000;
    double f_tolerance = 1e-10;
    double x_tolerance = 1e-8;
    double initial_step = 0.25;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t evaluations = 0;
    bool converged = false;
};

/// Nelder-Mead minimization of `f` from `x0`.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& options = {});

}  // namespace novas
