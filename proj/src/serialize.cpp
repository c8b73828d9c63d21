#include "novas/serialize.hpp"

#include <cmath>

#include "novas/error.hpp"

namespace novas {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Family parse_family(const std::string& text) {
    for (auto f : kAllFamilies) {
        if (text == to_string(f)) return f;
    }
    throw InvalidInput("unknown method family '" + text + "'");
}

}  // namespace

json to_json(const NovasWeights& w) {
    json j{{"variant", std::string(to_string(w.variant))},
           {"alpha", w.alpha},
           {"a0", w.a0},
           {"order", w.order},
           {"lags", w.lags},
           {"trim_bound", number_or_null(w.trim_bound())},
           {"constraint_sum", w.constraint_sum()}};
    if (is_ga_family(w.variant)) {
        j["a1"] = w.shape.a1;
        j["b1"] = w.shape.b1;
    } else {
        j["c"] = w.shape.c;
    }
    return j;
}

json to_json(const CalibratedTransform& ct) {
    double max_abs = 0.0;
    for (double r : ct.residuals) max_abs = std::max(max_abs, std::abs(r));
    return json{{"weights", to_json(ct.weights)},
                {"objective", ct.objective},
                {"kurtosis_distance", ct.objective},
                {"n", ct.history.size()},
                {"residual_count", ct.residuals.size()},
                {"max_abs_residual", max_abs},
                {"s2_n", ct.s2_n},
                {"evaluated_points", ct.evaluated_points},
                {"feasible_points", ct.feasible_points}};
}

json to_json(const GarchFit& fit) {
    return json{{"params", {{"omega", fit.params.omega}, {"alpha1", fit.params.alpha1}, {"beta1", fit.params.beta1}}},
                {"loglik", fit.loglik},
                {"n", fit.n}};
}

json to_json(const ForecastRecord& r) {
    json j{{"method", r.method},
           {"variant", r.variant ? json(std::string(to_string(*r.variant))) : json(nullptr)},
           {"alpha", r.alpha ? json(*r.alpha) : json(nullptr)},
           {"horizon", r.result.horizon},
           {"risk", std::string(to_string(r.risk))},
           {"statistic", std::string(to_string(r.statistic))},
           {"point", r.result.point},
           {"ensemble_mean", r.result.ensemble_mean},
           {"ensemble_median", r.result.ensemble_median},
           {"aggregate_of_step_predictors", r.result.aggregate_of_step_predictors},
           {"M", r.paths},
           {"seed", r.seed.value}};
    return j;
}

json to_json(const MethodDescriptor& m) {
    json j{{"family", std::string(to_string(m.family))}, {"name", m.name()}};
    if (m.is_novas()) {
        j["alpha"] = m.alpha;
        j["innovations"] = std::string(to_string(m.innovations));
    }
    if (m.family != Family::GARCH_DIRECT) j["risk"] = std::string(to_string(m.risk));
    return j;
}

MethodDescriptor method_from_json(const json& j) {
    MethodDescriptor m;
    m.family = parse_family(j.at("family").get<std::string>());
    if (j.contains("alpha")) m.alpha = j.at("alpha").get<double>();
    if (j.contains("innovations")) m.innovations = parse_innovation_kind(j.at("innovations").get<std::string>());
    if (j.contains("risk")) m.risk = parse_risk(j.at("risk").get<std::string>());
    return m;
}

json to_json(const BacktestReport& report) {
    json methods = json::array();
    for (std::size_t q = 0; q < report.methods.size(); ++q) {
        json m = to_json(report.methods[q]);
        m["calibration_failures"] = report.diagnostics[q].calibration_failures;
        m["guard_failures"] = report.diagnostics[q].guard_failures;
        methods.push_back(std::move(m));
    }
    json dropped = json::array();
    for (const auto& m : report.dropped) dropped.push_back(to_json(m));
    json scores = json::array();
    for (const auto& s : report.scores) {
        scores.push_back({{"method", s.method.name()},
                          {"horizon", s.horizon},
                          {"score", number_or_null(s.score)},
                          {"ratio", number_or_null(s.ratio)},
                          {"n_predictions", s.n_predictions}});
    }
    json series = json::array();
    for (const auto& hs : report.series) {
        json preds = json::array();
        for (const auto& column : hs.preds) {
            json values = json::array();
            for (const auto& v : column) values.push_back(v ? json(*v) : json(nullptr));
            preds.push_back(std::move(values));
        }
        series.push_back({{"horizon", hs.horizon}, {"truth", hs.truth}, {"common", hs.common}, {"predictions", preds}});
    }
    json best = json::array();
    for (const auto& [key, index] : report.best_per_family) {
        best.push_back({{"family", std::string(to_string(key.first))},
                        {"horizon", key.second},
                        {"method", report.scores[index].method.name()},
                        {"ratio", report.scores[index].ratio}});
    }
    return json{{"window", report.window}, {"length", report.length},
                {"metric", std::string(to_string(report.metric))},
                {"methods", methods},   {"dropped", dropped},
                {"scores", scores},     {"best_per_family", best},
                {"series", series}};
}

BacktestReport report_from_json(const json& j) {
    BacktestReport report;
    report.window = j.at("window").get<std::size_t>();
    report.length = j.at("length").get<std::size_t>();
    report.metric = parse_metric(j.at("metric").get<std::string>());
    std::map<std::string, std::size_t> by_name;
    for (const auto& m : j.at("methods")) {
        report.methods.push_back(method_from_json(m));
        report.diagnostics.push_back({m.value("calibration_failures", std::size_t{0}),
                                      m.value("guard_failures", std::size_t{0})});
        by_name[report.methods.back().name()] = report.methods.size() - 1;
    }
    for (const auto& m : j.at("dropped")) report.dropped.push_back(method_from_json(m));
    for (const auto& s : j.at("scores")) {
        const auto it = by_name.find(s.at("method").get<std::string>());
        if (it == by_name.end()) throw InvalidInput("score refers to an unknown method");
        MethodScore score;
        score.method = report.methods[it->second];
        score.horizon = s.at("horizon").get<std::size_t>();
        score.score = number_from(s.at("score"));
        score.ratio = number_from(s.at("ratio"));
        score.n_predictions = s.at("n_predictions").get<std::size_t>();
        report.scores.push_back(score);
    }
    for (const auto& h : j.at("series")) {
        HorizonSeries hs;
        hs.horizon = h.at("horizon").get<std::size_t>();
        hs.truth = h.at("truth").get<std::vector<double>>();
        hs.common = h.at("common").get<std::vector<bool>>();
        for (const auto& column : h.at("predictions")) {
            std::vector<std::optional<double>> values;
            for (const auto& v : column) values.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
            hs.preds.push_back(std::move(values));
        }
        report.series.push_back(std::move(hs));
    }
    relative_report(report);
    return report;
}

}  // namespace novas
