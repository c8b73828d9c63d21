#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novas/calibrate.hpp"
#include "novas/innovations.hpp"
#include "novas/rng.hpp"

namespace novas {

enum class Risk { L1, L2 };
enum class Statistic { SQUARED_STEP, AGGREGATED_SQUARED };

std::string_view to_string(Risk r) noexcept;
std::string_view to_string(Statistic s) noexcept;
Risk parse_risk(std::string_view text);
Statistic parse_statistic(std::string_view text);

inline constexpr std::size_t kMinPaths = 100;

struct ForecastRequest {
    std::size_t horizon = 1;
    std::size_t paths = 5000;
    Risk risk = Risk::L2;
    Statistic statistic = Statistic::AGGREGATED_SQUARED;
    Seed seed{};
    bool freeze_variance = false;  // hold s^2_n fixed along each path

    void validate() const;
};

struct ForecastResult {
    double point = 0.0;
    double ensemble_mean = 0.0;
    double ensemble_median = 0.0;
    std::size_t horizon = 0;
    /// Mean of the h per-step predictors (each step reduced by the same
    /// risk). Equal to `point` under L2; differs under L1.
    double aggregate_of_step_predictors = 0.0;
};

/// Pseudo future path (Y*_{n+1}, ..., Y*_{n+h}) from given innovations. Each
/// step feeds back into the lag window and, unless `freeze_variance`, into
/// the running variance.
std::vector<double> simulate_path(const CalibratedTransform& ct, std::span<const double> innovations,
                                  bool freeze_variance = false);

/// M x H matrix of squared pseudo returns, row-major (path m, step k).
struct SquaredEnsemble {
    std::size_t paths = 0;
    std::size_t horizon = 0;
    std::vector<double> y2;

    std::span<const double> path(std::size_t m) const { return {y2.data() + m * horizon, horizon}; }
};

/// Draws `paths` innovation vectors of length `horizon`, path m from the
/// stream derive_seed(seed, m), and simulates each through the transform.
/// The first h columns equal the ensemble a horizon-h call would produce.
SquaredEnsemble simulate_ensemble(const CalibratedTransform& ct, const InnovationSource& source,
                                  std::size_t paths, std::size_t horizon, Seed seed,
                                  bool freeze_variance = false);

/// Per-path statistic over the first h columns of an ensemble.
using PathStatistic = std::function<double(std::span<const double> squared_path, std::size_t h)>;

PathStatistic statistic_function(Statistic s);

/// Applies the statistic to every path and reduces across paths (mean for
/// L2, median for L1).
ForecastResult summarize(const SquaredEnsemble& ens, std::size_t h, Risk risk, Statistic statistic);
ForecastResult summarize(const SquaredEnsemble& ens, std::size_t h, Risk risk, const PathStatistic& g);

ForecastResult predict(const CalibratedTransform& ct, const InnovationSource& source, const ForecastRequest& req);

/// Exact median (average of the two middle order statistics for even sizes).
double median(std::vector<double> values);
double mean(std::span<const double> values);

}  // namespace novas
