#pragma once

#include <json.hpp>

#include "novas/backtest.hpp"
#include "novas/calibrate.hpp"
#include "novas/garch.hpp"
#include "novas/predictor.hpp"

namespace novas {

nlohmann::json to_json(const NovasWeights& w);
nlohmann::json to_json(const CalibratedTransform& ct);
nlohmann::json to_json(const GarchFit& fit);
nlohmann::json to_json(const MethodDescriptor& m);
nlohmann::json to_json(const BacktestReport& report);

/// The forecast record written by `novas forecast`.
struct ForecastRecord {
    std::string method;  // novas | garch-direct | garch-bootstrap
    std::optional<NovasVariant> variant;
    std::optional<double> alpha;
    Risk risk = Risk::L2;
    Statistic statistic = Statistic::AGGREGATED_SQUARED;
    std::size_t paths = 0;
    Seed seed{};
    ForecastResult result;
};

nlohmann::json to_json(const ForecastRecord& record);

MethodDescriptor method_from_json(const nlohmann::json& j);
BacktestReport report_from_json(const nlohmann::json& j);

}  // namespace novas
