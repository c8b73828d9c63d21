#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "novas/calibrate.hpp"
#include "novas/innovations.hpp"
#include "novas/predictor.hpp"
#include "novas/rng.hpp"

namespace novas {

enum class Family { GE, GE_NO_A0, GA, GA_NO_A0, GARCH_BOOT, GARCH_DIRECT };

inline constexpr Family kAllFamilies[] = {Family::GE,       Family::GE_NO_A0,   Family::GA,
                                          Family::GA_NO_A0, Family::GARCH_BOOT, Family::GARCH_DIRECT};

std::string_view to_string(Family f) noexcept;
/// Column heading used in the family-best table.
std::string_view table_heading(Family f) noexcept;
Family family_of(NovasVariant v) noexcept;

/// One forecasting approach. alpha / innovations are meaningful for NoVaS
/// families only; risk is unused by GARCH_DIRECT.
struct MethodDescriptor {
    Family family = Family::GARCH_DIRECT;
    double alpha = 0.0;
    Risk risk = Risk::L2;
    InnovationKind innovations = InnovationKind::TRIMMED_NORMAL;

    bool is_novas() const noexcept { return family != Family::GARCH_BOOT && family != Family::GARCH_DIRECT; }
    NovasVariant variant() const;
    std::string name() const;
};

enum class Metric { SQUARED, LITERAL };
std::string_view to_string(Metric m) noexcept;
Metric parse_metric(std::string_view text);

struct BacktestConfig {
    std::size_t window = 250;
    std::vector<std::size_t> horizons{1, 5, 30};
    std::vector<double> alpha_grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
    std::vector<NovasVariant> variants{std::begin(kAllVariants), std::end(kAllVariants)};
    std::vector<Risk> risks{Risk::L1, Risk::L2};
    std::vector<InnovationKind> innovations{InnovationKind::TRIMMED_NORMAL, InnovationKind::EMPIRICAL};
    bool garch_bootstrap = true;
    std::size_t paths = 5000;
    Seed seed{};
    Metric metric = Metric::SQUARED;
    CalibrationGrid grid{};
    bool freeze_variance = false;
    /// Score every method on the origins where all scored methods produced a
    /// prediction; otherwise each method is scored on its own origins.
    bool common_window = true;
    std::size_t threads = 0;  // 0: hardware concurrency

    void validate(std::size_t series_length) const;
    /// The full method list in report order; GARCH_DIRECT is always present.
    std::vector<MethodDescriptor> methods() const;
};

/// (len - window - h + 1) forecast origins for horizon h.
std::size_t prediction_count(std::size_t length, std::size_t window, std::size_t h);

struct MethodScore {
    MethodDescriptor method;
    std::size_t horizon = 0;
    double score = 0.0;
    std::size_t n_predictions = 0;
    double ratio = 0.0;
};

struct MethodDiagnostics {
    std::size_t calibration_failures = 0;  // windows where calibration failed
    std::size_t guard_failures = 0;        // windows where the inverse hit the trim guard
};

struct HorizonSeries {
    std::size_t horizon = 0;
    std::vector<double> truth;                              // per origin
    std::vector<std::vector<std::optional<double>>> preds;  // [method][origin]
    std::vector<bool> common;                               // every scored method has a value
};

struct BacktestReport {
    std::vector<MethodDescriptor> methods;  // scored methods, report order
    std::vector<MethodDescriptor> dropped;  // methods with no prediction on any window
    std::vector<MethodScore> scores;
    /// (family, horizon) -> index into `scores` of the minimal-ratio member.
    std::map<std::pair<Family, std::size_t>, std::size_t> best_per_family;
    std::vector<HorizonSeries> series;
    std::vector<MethodDiagnostics> diagnostics;  // parallel to `methods`
    std::size_t window = 0;
    std::size_t length = 0;
    Metric metric = Metric::SQUARED;

    const MethodScore& score_of(const MethodDescriptor& m, std::size_t horizon) const;
};

/// Squared-error sum (default) or the literal signed sum of differences.
double score_performance(std::span<const double> preds, std::span<const double> truths,
                         Metric metric = Metric::SQUARED);

BacktestReport run_rolling_poos(const ReturnSeries& y, const BacktestConfig& cfg);

/// Divides by the GARCH_DIRECT score at each horizon and selects the family
/// minima. Called by run_rolling_poos; exposed for reports built elsewhere.
void relative_report(BacktestReport& report);

struct FamilyTableRow {
    std::size_t horizon = 0;
    std::map<Family, double> ratio;  // families absent from the run are missing
};

std::vector<FamilyTableRow> family_table(const BacktestReport& report);

/// Six-column family-best table, one row per horizon.
std::string format_family_table(const BacktestReport& report, const std::string& label = "");

std::string report_csv(const BacktestReport& report);
/// Per-origin prediction / truth pairs for every method and horizon.
std::string pairs_csv(const BacktestReport& report);

}  // namespace novas
