#include "novas/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "novas/error.hpp"
#include "novas/transform.hpp"

namespace novas {

std::size_t CalibrationGrid::effective_cap(std::size_t n) const {
    const std::size_t by_length = window_divisor > 0 ? n / window_divisor : order_cap;
    return std::max<std::size_t>(1, std::min(order_cap, by_length));
}

std::vector<double> CalibrationGrid::ge_c_values() const {
    std::vector<double> out;
    if (ge_c_count == 0) return out;
    if (ge_c_count == 1) return {ge_c_min};
    const double ratio = std::log(ge_c_max / ge_c_min);
    for (std::size_t i = 0; i < ge_c_count; ++i) {
        out.push_back(ge_c_min * std::exp(ratio * static_cast<double>(i) / static_cast<double>(ge_c_count - 1)));
    }
    return out;
}

std::vector<double> CalibrationGrid::ga_values() const {
    std::vector<double> out;
    if (!(ga_step > 0.0)) return out;
    for (std::size_t k = 1;; ++k) {
        const double v = static_cast<double>(k) * ga_step;
        if (v >= 1.0 - 1e-9) break;
        out.push_back(v);
    }
    return out;
}

CalibrationGrid CalibrationGrid::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid config '" + path + "'");
    CalibrationGrid g;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        auto strip = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        if (strip(line).empty()) continue;
        if (eq == std::string::npos) {
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            if (key == "ga_step") g.ga_step = std::stod(value);
            else if (key == "ge_c_count") g.ge_c_count = std::stoul(value);
            else if (key == "ge_c_min") g.ge_c_min = std::stod(value);
            else if (key == "ge_c_max") g.ge_c_max = std::stod(value);
            else if (key == "tail_mass") g.tail_mass = std::stod(value);
            else if (key == "order_cap") g.order_cap = std::stoul(value);
            else if (key == "window_divisor") g.window_divisor = std::stoul(value);
            else if (key == "order_max") g.order_max = std::stoul(value);
            else if (key == "guard") g.guard = std::stod(value);
            else throw InvalidInput(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        } catch (const std::logic_error&) {
            throw InvalidInput(path + ":" + std::to_string(line_no) + ": bad value '" + value + "' for " + key);
        }
    }
    return g;
}

std::size_t ge_adaptive_order(double c, double tail_mass, std::size_t cap) {
    cap = std::max<std::size_t>(cap, 1);
    if (!(c > 0.0)) return cap;
    // Tail mass beyond lag p of the infinite exponential sequence is e^{-c(p+1)}.
    for (std::size_t p = 1; p <= cap; ++p) {
        if (std::exp(-c * static_cast<double>(p + 1)) < tail_mass) return p;
    }
    return cap;
}

std::vector<GridPoint> enumerate_grid(NovasVariant variant, const CalibrationGrid& grid, std::size_t cap) {
    std::vector<GridPoint> points;
    switch (variant) {
        case NovasVariant::GE:
        case NovasVariant::GE_NO_A0:
            for (double c : grid.ge_c_values()) {
                points.push_back({Shape{c, 0.0, 0.0}, ge_adaptive_order(c, grid.tail_mass, cap)});
            }
            break;
        case NovasVariant::GA: {
            const auto values = grid.ga_values();
            for (double a1 : values) {
                for (double b1 : values) points.push_back({Shape{0.0, a1, b1}, cap});
            }
            break;
        }
        case NovasVariant::GA_NO_A0:
            for (double b1 : grid.ga_values()) points.push_back({Shape{0.0, 0.0, b1}, cap});
            break;
    }
    return points;
}

namespace {

struct Candidate {
    NovasWeights weights;
    std::vector<double> residuals;
    double objective = std::numeric_limits<double>::infinity();
};

// Lexicographic (objective, order, a0); earlier grid index wins remaining ties.
bool better(const Candidate& a, const Candidate& b) {
    if (a.objective != b.objective) return a.objective < b.objective;
    if (a.weights.order != b.weights.order) return a.weights.order < b.weights.order;
    return a.weights.a0 < b.weights.a0;
}

void check_bound(const NovasWeights& w, const std::vector<double>& residuals) {
    if (w.effective_a0() <= 0.0) return;
    const double bound = w.trim_bound();
    for (double r : residuals) {
        if (std::abs(r) > bound * (1.0 + 1e-12)) {
            throw std::logic_error("forward residual exceeds the trimming bound");
        }
    }
}

}  // namespace

CalibratedTransform calibrate(NovasVariant variant, double alpha, const ReturnSeries& y, const CalibrationGrid& grid) {
    const std::size_t n = y.size();
    if (n < kMinCalibrationLength) {
        throw InvalidInput("calibration needs at least " + std::to_string(kMinCalibrationLength) + " returns, got " +
                           std::to_string(n));
    }
    if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
    const auto s2_path = running_variance_path(y.view());
    if (!(s2_path[n] > 0.0)) throw DegenerateInput("constant return series cannot be calibrated");

    std::size_t cap = std::min(grid.effective_cap(n), n - 3);
    const std::size_t ceiling = std::min(std::max(grid.order_max, cap), n - 3);
    std::size_t evaluated = 0;
    std::size_t feasible = 0;
    for (;;) {
        std::optional<Candidate> best;
        for (const GridPoint& point : enumerate_grid(variant, grid, cap)) {
            ++evaluated;
            auto weights = try_build_weights(variant, alpha, point.shape, point.order);
            if (!weights) continue;
            Candidate cand;
            try {
                cand.residuals = forward_transform(y.view(), s2_path, *weights, grid.guard);
                cand.objective = std::abs(sample_kurtosis(cand.residuals) - 3.0);
            } catch (const DegenerateInput&) {
                continue;
            }
            if (!std::isfinite(cand.objective)) continue;
            ++feasible;
            cand.weights = std::move(*weights);
            if (!best || better(cand, *best)) best = std::move(cand);
        }
        if (best) {
            check_bound(best->weights, best->residuals);
            CalibratedTransform ct;
            ct.weights = std::move(best->weights);
            ct.residuals = std::move(best->residuals);
            ct.history = y;
            ct.s2_n = s2_path[n];
            ct.objective = best->objective;
            ct.evaluated_points = evaluated;
            ct.feasible_points = feasible;
            return ct;
        }
        const bool can_escalate = !is_ga_family(variant) && cap < ceiling;
        if (!can_escalate) break;
        cap = std::min(cap * 2, ceiling);
    }
    throw CalibrationFailure(std::string(to_string(variant)) + " at alpha " + std::to_string(alpha) +
                             ": no feasible grid point (max order " + std::to_string(cap) + ")");
}

CalibratedTransform fit_transform(const NovasWeights& weights, const ReturnSeries& y, double guard) {
    const auto s2_path = running_variance_path(y.view());
    CalibratedTransform ct;
    ct.weights = weights;
    ct.residuals = forward_transform(y.view(), s2_path, weights, guard);
    ct.history = y;
    ct.s2_n = s2_path[y.size()];
    ct.objective = std::abs(sample_kurtosis(ct.residuals) - 3.0);
    ct.evaluated_points = 1;
    ct.feasible_points = 1;
    check_bound(ct.weights, ct.residuals);
    return ct;
}

}  // namespace novas
