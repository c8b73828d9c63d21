#include "novas/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "novas/error.hpp"
#include "novas/transform.hpp"

namespace novas {

std::string_view to_string(Risk r) noexcept { return r == Risk::L1 ? "L1" : "L2"; }

std::string_view to_string(Statistic s) noexcept {
    return s == Statistic::SQUARED_STEP ? "SQUARED_STEP" : "AGGREGATED_SQUARED";
}

Risk parse_risk(std::string_view text) {
    if (text == "L1" || text == "l1") return Risk::L1;
    if (text == "L2" || text == "l2") return Risk::L2;
    throw InvalidInput("unknown risk '" + std::string(text) + "' (expected L1 or L2)");
}

Statistic parse_statistic(std::string_view text) {
    if (text == "SQUARED_STEP" || text == "step") return Statistic::SQUARED_STEP;
    if (text == "AGGREGATED_SQUARED" || text == "aggregated") return Statistic::AGGREGATED_SQUARED;
    throw InvalidInput("unknown statistic '" + std::string(text) + "'");
}

void ForecastRequest::validate() const {
    if (horizon == 0) throw InvalidInput("horizon must be positive");
    if (paths < kMinPaths) throw InvalidInput("at least " + std::to_string(kMinPaths) + " paths are required");
}

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double median(std::vector<double> values) {
    if (values.empty()) throw InvalidInput("median of an empty set");
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double upper = values[mid];
    if (values.size() % 2 == 1) return upper;
    const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

namespace {

// Reusable path state: a newest-first squared-return buffer with `horizon`
// free slots in front of the history, plus the running variance of the
// history.
class PathSimulator {
public:
    PathSimulator(const CalibratedTransform& ct, std::size_t horizon, bool freeze_variance)
        : ct_(ct), horizon_(horizon), freeze_(freeze_variance) {
        const auto& y = ct.history.values;
        const std::size_t p = ct.weights.order;
        if (y.size() < p) throw InvalidInput("history shorter than the transform order");
        history_buffer_.assign(horizon + p, 0.0);
        for (std::size_t i = 0; i < p; ++i) {
            const double v = y[y.size() - 1 - i];
            history_buffer_[horizon + i] = v * v;
        }
        for (double v : y) base_variance_.push(v);
        buffer_ = history_buffer_;
    }

    // Writes signed Y*_{n+1..n+h} into `out` (h = innovations.size()).
    void run(std::span<const double> innovations, std::span<double> out) {
        const std::size_t p = ct_.weights.order;
        std::copy(history_buffer_.begin() + static_cast<std::ptrdiff_t>(horizon_), history_buffer_.end(),
                  buffer_.begin() + static_cast<std::ptrdiff_t>(horizon_));
        RunningVariance variance = base_variance_;
        const double frozen = ct_.s2_n;
        for (std::size_t k = 0; k < innovations.size(); ++k) {
            const std::size_t front = horizon_ - k;
            const double s2 = freeze_ ? frozen : variance.variance();
            const double w = innovations[k];
            const double magnitude = inverse_step(w, std::span<const double>(buffer_.data() + front, p), s2,
                                                  ct_.weights);
            const double value = std::copysign(magnitude, w);
            out[k] = value;
            buffer_[front - 1] = value * value;
            if (!freeze_) variance.push(value);
        }
    }

private:
    const CalibratedTransform& ct_;
    std::size_t horizon_;
    bool freeze_;
    std::vector<double> history_buffer_;
    std::vector<double> buffer_;
    RunningVariance base_variance_;
};

}  // namespace

std::vector<double> simulate_path(const CalibratedTransform& ct, std::span<const double> innovations,
                                  bool freeze_variance) {
    PathSimulator sim(ct, innovations.size(), freeze_variance);
    std::vector<double> out(innovations.size());
    sim.run(innovations, out);
    return out;
}

SquaredEnsemble simulate_ensemble(const CalibratedTransform& ct, const InnovationSource& source, std::size_t paths,
                                  std::size_t horizon, Seed seed, bool freeze_variance) {
    if (horizon == 0) throw InvalidInput("horizon must be positive");
    SquaredEnsemble ens;
    ens.paths = paths;
    ens.horizon = horizon;
    ens.y2.resize(paths * horizon);
    PathSimulator sim(ct, horizon, freeze_variance);
    std::vector<double> innovations(horizon);
    std::vector<double> values(horizon);
    for (std::size_t m = 0; m < paths; ++m) {
        Rng rng = make_rng(derive_seed(seed, m));
        source.draw(rng, innovations);
        sim.run(innovations, values);
        double* row = ens.y2.data() + m * horizon;
        for (std::size_t k = 0; k < horizon; ++k) row[k] = values[k] * values[k];
    }
    return ens;
}

PathStatistic statistic_function(Statistic s) {
    if (s == Statistic::SQUARED_STEP) {
        return [](std::span<const double> path, std::size_t h) { return path[h - 1]; };
    }
    return [](std::span<const double> path, std::size_t h) {
        double total = 0.0;
        for (std::size_t k = 0; k < h; ++k) total += path[k];
        return total / static_cast<double>(h);
    };
}

ForecastResult summarize(const SquaredEnsemble& ens, std::size_t h, Risk risk, Statistic statistic) {
    ForecastResult out = summarize(ens, h, risk, statistic_function(statistic));
    if (statistic == Statistic::SQUARED_STEP) out.aggregate_of_step_predictors = out.point;
    return out;
}

ForecastResult summarize(const SquaredEnsemble& ens, std::size_t h, Risk risk, const PathStatistic& g) {
    if (h == 0 || h > ens.horizon) throw InvalidInput("horizon outside the simulated ensemble");
    if (ens.paths == 0) throw InvalidInput("empty ensemble");
    std::vector<double> stats(ens.paths);
    for (std::size_t m = 0; m < ens.paths; ++m) stats[m] = g(ens.path(m), h);

    ForecastResult out;
    out.horizon = h;
    out.ensemble_mean = mean(stats);
    out.ensemble_median = median(stats);
    out.point = risk == Risk::L2 ? out.ensemble_mean : out.ensemble_median;

    std::vector<double> column(ens.paths);
    double step_total = 0.0;
    for (std::size_t k = 0; k < h; ++k) {
        for (std::size_t m = 0; m < ens.paths; ++m) column[m] = ens.y2[m * ens.horizon + k];
        step_total += risk == Risk::L2 ? mean(column) : median(column);
    }
    out.aggregate_of_step_predictors = step_total / static_cast<double>(h);
    return out;
}

ForecastResult predict(const CalibratedTransform& ct, const InnovationSource& source, const ForecastRequest& req) {
    req.validate();
    const SquaredEnsemble ens = simulate_ensemble(ct, source, req.paths, req.horizon, req.seed, req.freeze_variance);
    return summarize(ens, req.horizon, req.risk, req.statistic);
}

}  // namespace novas
