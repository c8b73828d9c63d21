#include "novas/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "novas/error.hpp"
#include "novas/garch.hpp"
#include "novas/parallel.hpp"

namespace novas {

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::GE: return "GE";
        case Family::GE_NO_A0: return "GE_NO_A0";
        case Family::GA: return "GA";
        case Family::GA_NO_A0: return "GA_NO_A0";
        case Family::GARCH_BOOT: return "GARCH_BOOT";
        case Family::GARCH_DIRECT: return "GARCH_DIRECT";
    }
    return "?";
}

std::string_view table_heading(Family f) noexcept {
    switch (f) {
        case Family::GE: return "GE-NoVaS";
        case Family::GE_NO_A0: return "GE-NoVaS-no-a0";
        case Family::GA: return "GA-NoVaS";
        case Family::GA_NO_A0: return "GA-NoVaS-no-a0";
        case Family::GARCH_BOOT: return "GARCH-boot";
        case Family::GARCH_DIRECT: return "GARCH-direct";
    }
    return "?";
}

Family family_of(NovasVariant v) noexcept {
    switch (v) {
        case NovasVariant::GE: return Family::GE;
        case NovasVariant::GE_NO_A0: return Family::GE_NO_A0;
        case NovasVariant::GA: return Family::GA;
        case NovasVariant::GA_NO_A0: return Family::GA_NO_A0;
    }
    return Family::GE;
}

NovasVariant MethodDescriptor::variant() const {
    switch (family) {
        case Family::GE: return NovasVariant::GE;
        case Family::GE_NO_A0: return NovasVariant::GE_NO_A0;
        case Family::GA: return NovasVariant::GA;
        case Family::GA_NO_A0: return NovasVariant::GA_NO_A0;
        default: throw InvalidInput("GARCH methods have no NoVaS variant");
    }
}

std::string MethodDescriptor::name() const {
    std::string out(to_string(family));
    if (is_novas()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "/a=%.4g", alpha);
        out += buf;
        out += "/";
        out += to_string(innovations);
    }
    if (family != Family::GARCH_DIRECT) {
        out += "/";
        out += to_string(risk);
    }
    return out;
}

std::string_view to_string(Metric m) noexcept { return m == Metric::SQUARED ? "squared" : "literal"; }

Metric parse_metric(std::string_view text) {
    if (text == "squared") return Metric::SQUARED;
    if (text == "literal") return Metric::LITERAL;
    throw InvalidInput("unknown metric '" + std::string(text) + "' (expected squared or literal)");
}

std::size_t prediction_count(std::size_t length, std::size_t window, std::size_t h) {
    if (length < window + h) return 0;
    return length - window - h + 1;
}

void BacktestConfig::validate(std::size_t series_length) const {
    if (horizons.empty()) throw InvalidInput("at least one horizon is required");
    for (auto h : horizons) {
        if (h == 0) throw InvalidInput("horizons must be positive");
    }
    if (window < kMinCalibrationLength) {
        throw InvalidInput("window must be at least " + std::to_string(kMinCalibrationLength));
    }
    if (window >= series_length) {
        throw InvalidInput("window " + std::to_string(window) + " must be shorter than the series (" +
                           std::to_string(series_length) + ")");
    }
    const auto max_h = *std::max_element(horizons.begin(), horizons.end());
    if (series_length < window + max_h) {
        throw InvalidInput("series of length " + std::to_string(series_length) + " is too short for window " +
                           std::to_string(window) + " and horizon " + std::to_string(max_h));
    }
    for (double a : alpha_grid) {
        if (!(a > 0.0 && a < 1.0)) throw InvalidInput("alpha grid values must lie in (0, 1)");
    }
    if (paths < kMinPaths) throw InvalidInput("at least " + std::to_string(kMinPaths) + " paths are required");
    if (risks.empty()) throw InvalidInput("at least one risk criterion is required");
}

std::vector<MethodDescriptor> BacktestConfig::methods() const {
    std::vector<MethodDescriptor> out;
    for (auto v : variants) {
        for (double a : alpha_grid) {
            for (auto kind : innovations) {
                for (auto r : risks) out.push_back({family_of(v), a, r, kind});
            }
        }
    }
    if (garch_bootstrap) {
        for (auto r : risks) out.push_back({Family::GARCH_BOOT, 0.0, r, InnovationKind::TRIMMED_NORMAL});
    }
    out.push_back({Family::GARCH_DIRECT, 0.0, Risk::L2, InnovationKind::TRIMMED_NORMAL});
    return out;
}

const MethodScore& BacktestReport::score_of(const MethodDescriptor& m, std::size_t horizon) const {
    for (const auto& s : scores) {
        if (s.horizon == horizon && s.method.family == m.family && s.method.alpha == m.alpha &&
            s.method.risk == m.risk && s.method.innovations == m.innovations) {
            return s;
        }
    }
    throw InvalidInput("no score for " + m.name() + " at horizon " + std::to_string(horizon));
}

double score_performance(std::span<const double> preds, std::span<const double> truths, Metric metric) {
    if (preds.size() != truths.size()) throw InvalidInput("prediction and truth lengths differ");
    if (preds.empty()) throw InvalidInput("cannot score an empty prediction set");
    double total = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double d = preds[i] - truths[i];
        total += metric == Metric::SQUARED ? d * d : d;
    }
    return total;
}

namespace {

// Forecasts of every method at one origin: value[method][horizon index].
struct OriginResult {
    std::vector<std::vector<std::optional<double>>> value;
    std::vector<bool> calibration_failed;
    std::vector<bool> guard_failed;
};

std::uint64_t stream_id(std::size_t variant, std::size_t alpha, std::size_t kind) {
    return 1 + (static_cast<std::uint64_t>(variant) * 4096 + alpha) * 4 + kind;
}

OriginResult forecast_origin(const ReturnSeries& y, const BacktestConfig& cfg,
                             const std::vector<MethodDescriptor>& methods, std::size_t origin) {
    const std::size_t len = y.size();
    OriginResult out;
    out.value.assign(methods.size(), std::vector<std::optional<double>>(cfg.horizons.size()));
    out.calibration_failed.assign(methods.size(), false);
    out.guard_failed.assign(methods.size(), false);

    std::vector<bool> valid(cfg.horizons.size());
    std::size_t max_h = 0;
    for (std::size_t j = 0; j < cfg.horizons.size(); ++j) {
        valid[j] = origin + cfg.window + cfg.horizons[j] <= len;
        if (valid[j]) max_h = std::max(max_h, cfg.horizons[j]);
    }
    if (max_h == 0) return out;

    const ReturnSeries sample{std::vector<double>(y.values.begin() + static_cast<std::ptrdiff_t>(origin),
                                                  y.values.begin() + static_cast<std::ptrdiff_t>(origin + cfg.window))};
    const Seed origin_seed = derive_seed(cfg.seed, origin);

    auto matches = [](const MethodDescriptor& m, Family f, double alpha, InnovationKind kind) {
        return m.family == f && m.alpha == alpha && m.innovations == kind;
    };
    auto record = [&](std::size_t mi, const SquaredEnsemble& ens) {
        for (std::size_t j = 0; j < cfg.horizons.size(); ++j) {
            if (!valid[j]) continue;
            out.value[mi][j] = summarize(ens, cfg.horizons[j], methods[mi].risk, Statistic::AGGREGATED_SQUARED).point;
        }
    };

    for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
        const NovasVariant variant = cfg.variants[vi];
        const Family family = family_of(variant);
        for (std::size_t ai = 0; ai < cfg.alpha_grid.size(); ++ai) {
            const double alpha = cfg.alpha_grid[ai];
            std::optional<CalibratedTransform> ct;
            try {
                ct = calibrate(variant, alpha, sample, cfg.grid);
            } catch (const CalibrationFailure&) {
            } catch (const DegenerateInput&) {
            }
            for (std::size_t ki = 0; ki < cfg.innovations.size(); ++ki) {
                const InnovationKind kind = cfg.innovations[ki];
                if (!ct) {
                    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                        if (matches(methods[mi], family, alpha, kind)) out.calibration_failed[mi] = true;
                    }
                    continue;
                }
                std::optional<SquaredEnsemble> ens;
                try {
                    const auto source = InnovationSource::for_transform(*ct, kind);
                    ens = simulate_ensemble(*ct, source, cfg.paths, max_h,
                                            derive_seed(origin_seed, stream_id(vi, ai, ki)), cfg.freeze_variance);
                } catch (const TrimBoundViolation&) {
                }
                for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                    if (!matches(methods[mi], family, alpha, kind)) continue;
                    if (ens) {
                        record(mi, *ens);
                    } else {
                        out.guard_failed[mi] = true;
                    }
                }
            }
        }
    }

    std::optional<GarchFit> fit;
    try {
        fit = fit_garch11_mle(sample.view());
    } catch (const Error&) {
    }
    std::optional<SquaredEnsemble> boot;
    if (fit && cfg.garch_bootstrap) boot = garch_bootstrap_ensemble(*fit, max_h, cfg.paths, derive_seed(origin_seed, 0));
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        const auto& m = methods[mi];
        if (m.is_novas()) continue;
        if (!fit) {
            out.calibration_failed[mi] = true;
            continue;
        }
        if (m.family == Family::GARCH_BOOT) {
            record(mi, *boot);
            continue;
        }
        const double last = sample.values.back();
        const auto path = garch_direct_forecast(*fit, last * last, max_h);
        for (std::size_t j = 0; j < cfg.horizons.size(); ++j) {
            if (!valid[j]) continue;
            const std::size_t h = cfg.horizons[j];
            double total = 0.0;
            for (std::size_t k = 0; k < h; ++k) total += path[k];
            out.value[mi][j] = total / static_cast<double>(h);
        }
    }
    return out;
}

}  // namespace

BacktestReport run_rolling_poos(const ReturnSeries& y, const BacktestConfig& cfg) {
    const std::size_t len = y.size();
    cfg.validate(len);
    const auto methods = cfg.methods();
    const std::size_t min_h = *std::min_element(cfg.horizons.begin(), cfg.horizons.end());
    const std::size_t origins = prediction_count(len, cfg.window, min_h);

    std::vector<OriginResult> results(origins);
    parallel_for(origins, cfg.threads,
                 [&](std::size_t s) { results[s] = forecast_origin(y, cfg, methods, s); });

    // A method that never produced a forecast is reported as dropped.
    std::vector<bool> alive(methods.size(), false);
    for (const auto& r : results) {
        for (std::size_t mi = 0; mi < methods.size(); ++mi) {
            for (const auto& v : r.value[mi]) alive[mi] = alive[mi] || v.has_value();
        }
    }

    BacktestReport report;
    report.window = cfg.window;
    report.length = len;
    report.metric = cfg.metric;
    std::vector<std::size_t> kept;
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        if (alive[mi] || methods[mi].family == Family::GARCH_DIRECT) {
            kept.push_back(mi);
            report.methods.push_back(methods[mi]);
            MethodDiagnostics d;
            for (const auto& r : results) {
                d.calibration_failures += r.calibration_failed[mi] ? 1 : 0;
                d.guard_failures += r.guard_failed[mi] ? 1 : 0;
            }
            report.diagnostics.push_back(d);
        } else {
            report.dropped.push_back(methods[mi]);
        }
    }

    for (std::size_t j = 0; j < cfg.horizons.size(); ++j) {
        const std::size_t h = cfg.horizons[j];
        HorizonSeries hs;
        hs.horizon = h;
        const std::size_t count = prediction_count(len, cfg.window, h);
        hs.truth.resize(count);
        for (std::size_t s = 0; s < count; ++s) {
            double total = 0.0;
            for (std::size_t k = 0; k < h; ++k) {
                const double v = y.values[s + cfg.window + k];
                total += v * v;
            }
            hs.truth[s] = total / static_cast<double>(h);
        }
        hs.preds.resize(kept.size());
        hs.common.assign(count, true);
        for (std::size_t q = 0; q < kept.size(); ++q) {
            hs.preds[q].resize(count);
            for (std::size_t s = 0; s < count; ++s) {
                hs.preds[q][s] = results[s].value[kept[q]][j];
                if (!hs.preds[q][s]) hs.common[s] = false;
            }
        }
        for (std::size_t q = 0; q < kept.size(); ++q) {
            std::vector<double> p;
            std::vector<double> t;
            for (std::size_t s = 0; s < count; ++s) {
                const bool use = cfg.common_window ? hs.common[s] : hs.preds[q][s].has_value();
                if (!use) continue;
                p.push_back(*hs.preds[q][s]);
                t.push_back(hs.truth[s]);
            }
            MethodScore score;
            score.method = report.methods[q];
            score.horizon = h;
            score.n_predictions = p.size();
            score.score = p.empty() ? std::numeric_limits<double>::quiet_NaN() : score_performance(p, t, cfg.metric);
            report.scores.push_back(score);
        }
        report.series.push_back(std::move(hs));
    }
    relative_report(report);
    return report;
}

void relative_report(BacktestReport& report) {
    std::map<std::size_t, double> benchmark;
    for (const auto& s : report.scores) {
        if (s.method.family == Family::GARCH_DIRECT) benchmark[s.horizon] = s.score;
    }
    report.best_per_family.clear();
    for (std::size_t i = 0; i < report.scores.size(); ++i) {
        auto& s = report.scores[i];
        const auto it = benchmark.find(s.horizon);
        if (it == benchmark.end()) {
            throw InvalidInput("no GARCH-direct benchmark at horizon " + std::to_string(s.horizon));
        }
        if (!(it->second != 0.0) || !std::isfinite(it->second)) {
            throw InvalidInput("GARCH-direct benchmark score at horizon " + std::to_string(s.horizon) +
                               " is zero or undefined");
        }
        s.ratio = s.method.family == Family::GARCH_DIRECT ? 1.0 : s.score / it->second;
        if (!std::isfinite(s.ratio)) continue;
        const auto key = std::make_pair(s.method.family, s.horizon);
        const auto best = report.best_per_family.find(key);
        if (best == report.best_per_family.end() || s.ratio < report.scores[best->second].ratio) {
            report.best_per_family[key] = i;
        }
    }
}

std::vector<FamilyTableRow> family_table(const BacktestReport& report) {
    std::vector<FamilyTableRow> rows;
    for (const auto& hs : report.series) {
        FamilyTableRow row;
        row.horizon = hs.horizon;
        for (auto f : kAllFamilies) {
            const auto it = report.best_per_family.find({f, hs.horizon});
            if (it != report.best_per_family.end()) row.ratio[f] = report.scores[it->second].ratio;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_family_table(const BacktestReport& report, const std::string& label) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-14s", "");
    out << buf;
    for (auto f : kAllFamilies) {
        std::snprintf(buf, sizeof buf, " %15s", std::string(table_heading(f)).c_str());
        out << buf;
    }
    out << '\n';
    for (const auto& row : family_table(report)) {
        const std::string name = (label.empty() ? std::string{} : label + "-") + std::to_string(row.horizon) +
                                 (row.horizon == 1 ? "step" : "steps");
        std::snprintf(buf, sizeof buf, "%-14s", name.c_str());
        out << buf;
        for (auto f : kAllFamilies) {
            const auto it = row.ratio.find(f);
            if (it == row.ratio.end()) {
                std::snprintf(buf, sizeof buf, " %15s", "-");
            } else {
                std::snprintf(buf, sizeof buf, " %15.5f", it->second);
            }
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string method_columns(const MethodDescriptor& m) {
    std::string out;
    switch (m.family) {
        case Family::GARCH_BOOT: out = "garch-bootstrap,,,"; break;
        case Family::GARCH_DIRECT: out = "garch-direct,,,"; break;
        default: out = "novas," + std::string(to_string(m.variant())) + "," + fmt(m.alpha) + ","; break;
    }
    out += m.family == Family::GARCH_DIRECT ? "" : std::string(to_string(m.risk));
    out += ",";
    out += m.is_novas() ? std::string(to_string(m.innovations)) : "";
    return out;
}

}  // namespace

std::string report_csv(const BacktestReport& report) {
    std::ostringstream out;
    out << "method,variant,alpha,risk,innovation_kind,horizon,score,ratio,n_predictions\n";
    for (const auto& s : report.scores) {
        out << method_columns(s.method) << ',' << s.horizon << ',' << fmt(s.score) << ',' << fmt(s.ratio) << ','
            << s.n_predictions << '\n';
    }
    return out.str();
}

std::string pairs_csv(const BacktestReport& report) {
    std::ostringstream out;
    out << "method,variant,alpha,risk,innovation_kind,horizon,origin,prediction,truth,common\n";
    for (const auto& hs : report.series) {
        for (std::size_t q = 0; q < report.methods.size() && q < hs.preds.size(); ++q) {
            const std::string cols = method_columns(report.methods[q]);
            for (std::size_t s = 0; s < hs.truth.size(); ++s) {
                out << cols << ',' << hs.horizon << ',' << s << ',';
                if (hs.preds[q][s]) out << fmt(*hs.preds[q][s]);
                out << ',' << fmt(hs.truth[s]) << ',' << (hs.common[s] ? 1 : 0) << '\n';
            }
        }
    }
    return out.str();
}

}  // namespace novas
