#include "novas/garch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "novas/error.hpp"

namespace novas {

std::vector<double> garch_variance_path(std::span<const double> y, const GarchParams& p) {
    const std::size_t n = y.size();
    std::vector<double> s2(n);
    if (n == 0) return s2;
    double mu = 0.0;
    for (double v : y) mu += v;
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mu) * (v - mu);
    s2[0] = var / static_cast<double>(n);
    for (std::size_t t = 1; t < n; ++t) s2[t] = p.omega + p.alpha1 * y[t - 1] * y[t - 1] + p.beta1 * s2[t - 1];
    return s2;
}

double garch_loglik(std::span<const double> y, const GarchParams& p) {
    const auto s2 = garch_variance_path(y, p);
    const double log_2pi = std::log(2.0 * std::numbers::pi);
    double ll = 0.0;
    for (std::size_t t = 0; t < y.size(); ++t) {
        if (!(s2[t] > 0.0)) return -std::numeric_limits<double>::infinity();
        ll -= 0.5 * (log_2pi + std::log(s2[t]) + y[t] * y[t] / s2[t]);
    }
    return ll;
}

SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f, std::vector<double> x0,
                          const SimplexOptions& options) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> simplex(dim + 1, x0);
    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i < dim; ++i) simplex[i + 1][i] += options.initial_step;

    SimplexResult result;
    auto eval = [&](const std::vector<double>& x) {
        ++result.evaluations;
        const double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::max();
    };
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(simplex[i]);

    std::vector<std::size_t> order(dim + 1);
    std::vector<double> centroid(dim), trial(dim), trial2(dim);
    while (result.evaluations < options.max_evaluations) {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        double x_spread = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) x_spread = std::max(x_spread, std::abs(simplex[i][j] - simplex[best][j]));
        }
        const bool flat = std::abs(values[worst] - values[best]) <= options.f_tolerance * (1.0 + std::abs(values[best]));
        if (x_spread <= options.x_tolerance || (flat && x_spread <= 1e3 * options.x_tolerance)) {
            result.converged = true;
            break;
        }

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += simplex[i][j] / static_cast<double>(dim);
        }
        for (std::size_t j = 0; j < dim; ++j) trial[j] = centroid[j] + (centroid[j] - simplex[worst][j]);
        const double reflected = eval(trial);
        if (reflected < values[best]) {
            for (std::size_t j = 0; j < dim; ++j) trial2[j] = centroid[j] + 2.0 * (centroid[j] - simplex[worst][j]);
            const double expanded = eval(trial2);
            if (expanded < reflected) {
                simplex[worst] = trial2;
                values[worst] = expanded;
            } else {
                simplex[worst] = trial;
                values[worst] = reflected;
            }
            continue;
        }
        if (reflected < values[second_worst]) {
            simplex[worst] = trial;
            values[worst] = reflected;
            continue;
        }
        const bool outside = reflected < values[worst];
        for (std::size_t j = 0; j < dim; ++j) {
            trial2[j] = outside ? centroid[j] + 0.5 * (trial[j] - centroid[j])
                                : centroid[j] + 0.5 * (simplex[worst][j] - centroid[j]);
        }
        const double contracted = eval(trial2);
        if (contracted < std::min(values[worst], outside ? reflected : values[worst])) {
            simplex[worst] = trial2;
            values[worst] = contracted;
            continue;
        }
        // shrink toward the best vertex
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            for (std::size_t j = 0; j < dim; ++j) simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
            values[i] = eval(simplex[i]);
        }
    }
    const auto best_it = std::min_element(values.begin(), values.end());
    result.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
    result.value = *best_it;
    return result;
}

namespace {

double logistic(double u) { return 1.0 / (1.0 + std::exp(-u)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// (log omega, logit persistence, logit ARCH share) -> parameters inside the
// stationarity region.
GarchParams decode(std::span<const double> x) {
    const double persistence = std::min(logistic(x[1]), 1.0 - 1e-10);
    const double share = logistic(x[2]);
    return GarchParams{std::exp(x[0]), persistence * share, persistence * (1.0 - share)};
}

std::vector<double> encode(const GarchParams& p) {
    const double persistence = p.alpha1 + p.beta1;
    return {std::log(p.omega), logit(persistence), logit(p.alpha1 / persistence)};
}

}  // namespace

GarchFit fit_garch11_mle(std::span<const double> y) {
    if (y.size() < kMinGarchLength) {
        throw InvalidInput("GARCH fitting needs at least " + std::to_string(kMinGarchLength) + " returns");
    }
    double mu = 0.0;
    for (double v : y) mu += v;
    mu /= static_cast<double>(y.size());
    double var = 0.0;
    for (double v : y) var += (v - mu) * (v - mu);
    var /= static_cast<double>(y.size());
    if (!(var > 0.0)) throw DegenerateInput("constant return series cannot be fitted");

    static constexpr std::array<std::array<double, 2>, 5> kStarts{{
        {0.05, 0.90}, {0.10, 0.80}, {0.15, 0.70}, {0.05, 0.60}, {0.20, 0.50}}};

    auto objective = [&](std::span<const double> x) { return -garch_loglik(y, decode(x)); };

    GarchFit fit;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<double> best_x;
    for (const auto& [a, b] : kStarts) {
        const auto x0 = encode(GarchParams{var * (1.0 - a - b), a, b});
        fit.start_logliks.push_back(garch_loglik(y, decode(x0)));
        SimplexResult run = nelder_mead(objective, x0);
        // one restart from the optimum to shake off a collapsed simplex
        run = nelder_mead(objective, run.x);
        if (std::isfinite(run.value) && run.value < best_value) {
            best_value = run.value;
            best_x = run.x;
        }
    }
    if (best_x.empty()) throw ConvergenceFailure("GARCH(1,1) likelihood could not be evaluated at any start");

    fit.params = decode(best_x);
    fit.sigma2_path = garch_variance_path(y, fit.params);
    fit.loglik = -best_value;
    fit.n = y.size();
    return fit;
}

std::vector<double> garch_direct_forecast(const GarchFit& fit, double last_y2, std::size_t h) {
    if (fit.sigma2_path.empty()) throw InvalidInput("GARCH fit has no variance path");
    const auto& p = fit.params;
    std::vector<double> out(h);
    double s2 = p.omega + p.alpha1 * last_y2 + p.beta1 * fit.sigma2_path.back();
    for (std::size_t k = 0; k < h; ++k) {
        out[k] = s2;
        s2 = p.omega + (p.alpha1 + p.beta1) * s2;
    }
    return out;
}

SquaredEnsemble garch_bootstrap_ensemble(const GarchFit& fit, std::size_t h, std::size_t paths, Seed seed) {
    if (fit.sigma2_path.empty()) throw InvalidInput("GARCH fit has no variance path");
    if (h == 0) throw InvalidInput("horizon must be positive");
    SquaredEnsemble ens;
    ens.paths = paths;
    ens.horizon = h;
    ens.y2.resize(paths * h);
    const auto& pool = fit.sigma2_path;  // sigma*^2 drawn directly
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t m = 0; m < paths; ++m) {
        Rng rng = make_rng(derive_seed(seed, m));
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t k = 0; k < h; ++k) {
            const double s2 = pool[pick(rng)];
            const double w = normal(rng);
            ens.y2[m * h + k] = s2 * w * w;
        }
    }
    return ens;
}

ForecastResult garch_bootstrap_forecast(const GarchFit& fit, std::size_t h, std::size_t paths, Risk risk, Seed seed,
                                        Statistic statistic) {
    if (paths < kMinPaths) throw InvalidInput("at least " + std::to_string(kMinPaths) + " paths are required");
    return summarize(garch_bootstrap_ensemble(fit, h, paths, seed), h, risk, statistic);
}

}  // namespace novas
