#include "novas/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "novas/backtest.hpp"
#include "novas/calibrate.hpp"
#include "novas/error.hpp"
#include "novas/garch.hpp"
#include "novas/innovations.hpp"
#include "novas/predictor.hpp"
#include "novas/returns.hpp"
#include "novas/serialize.hpp"
#include "novas/simgen.hpp"

namespace novas::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kSidecarSuffix = ".sidecar.json";

// out.csv -> out.sidecar.json; names without an extension get the suffix appended.
std::string sibling(const std::string& path, const std::string& suffix) {
    fs::path p(path);
    if (p.has_extension()) p.replace_extension();
    return p.string() + suffix;
}

void write_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw IoError("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
}

ReturnSeries load_input(const json& cfg) {
    const auto path = cfg.at("input").get<std::string>();
    const auto kind = cfg.value("input_kind", std::string("auto"));
    const auto column = cfg.value("column", std::string());
    if (!fs::exists(path)) throw IoError("input file '" + path + "' does not exist");
    if (kind == "returns") return load_return_csv(path, column.empty() ? "return" : column);
    if (kind == "prices") return to_log_returns(load_price_csv(path, column.empty() ? "close" : column));
    if (!column.empty()) return to_log_returns(load_price_csv(path, column));
    try {
        return load_return_csv(path, "return");
    } catch (const InvalidInput& e) {
        if (std::string(e.what()).find("has no column") == std::string::npos) throw;
    }
    return to_log_returns(load_price_csv(path, "close"));
}

CalibrationGrid grid_from(const json& cfg) {
    const auto& g = cfg.at("grid");
    CalibrationGrid grid;
    grid.ga_step = g.at("ga_step").get<double>();
    grid.ge_c_count = g.at("ge_c_count").get<std::size_t>();
    grid.ge_c_min = g.at("ge_c_min").get<double>();
    grid.ge_c_max = g.at("ge_c_max").get<double>();
    grid.tail_mass = g.at("tail_mass").get<double>();
    grid.order_cap = g.at("order_cap").get<std::size_t>();
    grid.window_divisor = g.at("window_divisor").get<std::size_t>();
    grid.order_max = g.at("order_max").get<std::size_t>();
    grid.guard = g.at("guard").get<double>();
    return grid;
}

json grid_to_json(const CalibrationGrid& g) {
    return json{{"ga_step", g.ga_step},       {"ge_c_count", g.ge_c_count}, {"ge_c_min", g.ge_c_min},
                {"ge_c_max", g.ge_c_max},     {"tail_mass", g.tail_mass},   {"order_cap", g.order_cap},
                {"window_divisor", g.window_divisor}, {"order_max", g.order_max}, {"guard", g.guard}};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::string output_of(const json& cfg) { return cfg.at("output").get<std::string>(); }

void write_sidecar(const std::string& command, const json& cfg) {
    write_atomic(sibling(output_of(cfg), kSidecarSuffix), json{{"command", command}, {"config", cfg}}.dump(2) + "\n");
}

// ---- command bodies: each takes a fully resolved config ----

void exec_simulate(const json& cfg) {
    ModelSpec spec = default_spec(parse_model(cfg.at("model").get<std::string>()), cfg.at("n").get<std::size_t>(),
                                  Seed{cfg.at("seed").get<std::uint64_t>()});
    spec.burn_in = cfg.at("burn_in").get<std::size_t>();
    spec.unit_variance_t = cfg.at("t_unit_variance").get<bool>();
    const auto path = generate_path(spec);
    std::ostringstream out;
    out << "index,return\n";
    char buf[48];
    for (std::size_t i = 0; i < path.x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", path.x[i]);
        out << (i + 1) << ',' << buf << '\n';
    }
    write_atomic(output_of(cfg), out.str());
}

void exec_calibrate(const json& cfg) {
    const auto y = load_input(cfg);
    const auto ct = calibrate(parse_variant(cfg.at("variant").get<std::string>()), cfg.at("alpha").get<double>(), y,
                              grid_from(cfg));
    write_atomic(output_of(cfg), to_json(ct).dump(2) + "\n");
}

void exec_forecast(const json& cfg) {
    const auto y = load_input(cfg);
    ForecastRecord record;
    record.method = cfg.at("method").get<std::string>();
    record.risk = parse_risk(cfg.at("risk").get<std::string>());
    record.statistic = parse_statistic(cfg.at("statistic").get<std::string>());
    record.paths = cfg.at("paths").get<std::size_t>();
    record.seed = Seed{cfg.at("seed").get<std::uint64_t>()};
    const auto horizon = cfg.at("horizon").get<std::size_t>();
    if (record.method == "novas") {
        const auto variant = parse_variant(cfg.at("variant").get<std::string>());
        const double alpha = cfg.at("alpha").get<double>();
        record.variant = variant;
        record.alpha = alpha;
        const auto ct = calibrate(variant, alpha, y, grid_from(cfg));
        ForecastRequest req;
        req.horizon = horizon;
        req.paths = record.paths;
        req.risk = record.risk;
        req.statistic = record.statistic;
        req.seed = record.seed;
        req.freeze_variance = cfg.at("freeze_variance").get<bool>();
        const auto source =
            InnovationSource::for_transform(ct, parse_innovation_kind(cfg.at("innovations").get<std::string>()));
        record.result = predict(ct, source, req);
    } else if (record.method == "garch-bootstrap") {
        const auto fit = fit_garch11_mle(y.view());
        record.result = garch_bootstrap_forecast(fit, horizon, record.paths, record.risk, record.seed, record.statistic);
    } else if (record.method == "garch-direct") {
        const auto fit = fit_garch11_mle(y.view());
        const double last = y.values.back();
        const auto path = garch_direct_forecast(fit, last * last, horizon);
        double value = path.back();
        if (record.statistic == Statistic::AGGREGATED_SQUARED) {
            value = 0.0;
            for (double v : path) value += v;
            value /= static_cast<double>(horizon);
        }
        record.result = ForecastResult{value, value, value, horizon, value};
    } else {
        throw InvalidInput("unknown method '" + record.method + "'");
    }
    write_atomic(output_of(cfg), to_json(record).dump(2) + "\n");
}

BacktestConfig backtest_config(const json& cfg) {
    BacktestConfig bc;
    bc.window = cfg.at("window").get<std::size_t>();
    bc.horizons = cfg.at("horizons").get<std::vector<std::size_t>>();
    bc.alpha_grid = cfg.at("alpha_grid").get<std::vector<double>>();
    bc.variants.clear();
    for (const auto& v : cfg.at("variants")) bc.variants.push_back(parse_variant(v.get<std::string>()));
    bc.risks.clear();
    for (const auto& r : cfg.at("risks")) bc.risks.push_back(parse_risk(r.get<std::string>()));
    bc.innovations.clear();
    for (const auto& k : cfg.at("innovations")) bc.innovations.push_back(parse_innovation_kind(k.get<std::string>()));
    bc.garch_bootstrap = cfg.at("garch_bootstrap").get<bool>();
    bc.paths = cfg.at("paths").get<std::size_t>();
    bc.seed = Seed{cfg.at("seed").get<std::uint64_t>()};
    bc.metric = parse_metric(cfg.at("metric").get<std::string>());
    bc.grid = grid_from(cfg);
    bc.freeze_variance = cfg.at("freeze_variance").get<bool>();
    bc.common_window = cfg.at("common_window").get<bool>();
    bc.threads = cfg.at("threads").get<std::size_t>();
    return bc;
}

void exec_backtest(const json& cfg) {
    const auto y = load_input(cfg);
    const auto report = run_rolling_poos(y, backtest_config(cfg));
    const auto output = output_of(cfg);
    write_atomic(sibling(output, ".report.json"), to_json(report).dump(1) + "\n");
    write_atomic(output, report_csv(report));
    if (cfg.at("table").get<bool>()) std::cout << format_family_table(report, cfg.at("label").get<std::string>());
}

void exec_report(const json& cfg) {
    const auto report = report_from_json(read_json(cfg.at("input").get<std::string>()));
    write_atomic(output_of(cfg), pairs_csv(report));
    std::cout << format_family_table(report, cfg.at("label").get<std::string>());
}

void execute(const std::string& command, const json& cfg) {
    if (command == "simulate") exec_simulate(cfg);
    else if (command == "calibrate") exec_calibrate(cfg);
    else if (command == "forecast") exec_forecast(cfg);
    else if (command == "backtest") exec_backtest(cfg);
    else if (command == "report") exec_report(cfg);
    else throw InvalidInput("unknown command '" + command + "'");
    write_sidecar(command, cfg);
}

// ---- flag definitions ----

struct GridFlags {
    std::string file;
    double ga_step = CalibrationGrid{}.ga_step;
    std::size_t order_cap = CalibrationGrid{}.order_cap;

    void attach(CLI::App* app) {
        app->add_option("--grid", file, "Calibration grid file (key = value)")->check(CLI::ExistingFile);
        app->add_option("--ga-step", ga_step, "GA a1/b1 grid step")->capture_default_str();
        app->add_option("--order-cap", order_cap, "Cap on NoVaS order p / q")->capture_default_str();
    }

    json resolve(const CLI::App* app) const {
        CalibrationGrid g = file.empty() ? CalibrationGrid{} : CalibrationGrid::from_file(file);
        if (file.empty() || app->count("--ga-step") > 0) g.ga_step = ga_step;
        if (file.empty() || app->count("--order-cap") > 0) g.order_cap = order_cap;
        return grid_to_json(g);
    }
};

struct InputFlags {
    std::string input;
    std::string input_kind = "auto";
    std::string column;

    void attach(CLI::App* app) {
        app->add_option("--input", input, "Input CSV (returns or prices)")->required();
        app->add_option("--input-kind", input_kind, "auto, returns or prices")
            ->check(CLI::IsMember({"auto", "returns", "prices"}))
            ->capture_default_str();
        app->add_option("--column", column, "Column to read (default: return, else close prices)");
    }

    void resolve(json& cfg) const {
        cfg["input"] = input;
        cfg["input_kind"] = input_kind;
        cfg["column"] = column;
    }
};

std::vector<std::string> expand(const std::string& value, std::initializer_list<const char*> all) {
    if (value == "both" || value == "all") return {all.begin(), all.end()};
    return split_list(value);
}

}  // namespace

int run(int argc, char** argv) {
    CLI::App app{"NoVaS volatility forecasting: simulate, calibrate, forecast and backtest"};
    app.set_config("--config", "", "Read options from a TOML/INI file (flags take precedence)");
    std::string from_sidecar;
    std::string override_output;
    app.add_option("--from-sidecar", from_sidecar, "Replay a run from its sidecar JSON")->check(CLI::ExistingFile);
    app.add_option("--output", override_output, "With --from-sidecar: write to this path instead");
    app.require_subcommand(0, 1);

    std::uint64_t seed = 0;
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", seed, "Random seed (default 0: reproducible runs)")
            ->envname("NOVAS_SEED")
            ->capture_default_str();
    };

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Generate returns from one of the models M1..M8");
    std::string model;
    std::size_t n = 500;
    std::size_t burn_in = 500;
    bool t_unit = false;
    std::string sim_output = "returns.csv";
    simulate->add_option("--model", model, "M1..M8")->required();
    simulate->add_option("--n", n, "Series length")->capture_default_str();
    simulate->add_option("--burn-in", burn_in, "Discarded initial values")->capture_default_str();
    simulate->add_flag("--t-unit-variance", t_unit, "Scale t(5) draws to unit variance");
    simulate->add_option("--output", sim_output, "Output CSV")->capture_default_str();
    add_seed(simulate);

    // calibrate
    auto* calib = app.add_subcommand("calibrate", "Calibrate a NoVaS transform on a return series");
    InputFlags calib_in;
    GridFlags calib_grid;
    std::string calib_variant = "GE";
    double calib_alpha = 0.5;
    std::string calib_output = "calibration.json";
    calib_in.attach(calib);
    calib_grid.attach(calib);
    calib->add_option("--variant", calib_variant, "GE, GE_NO_A0, GA or GA_NO_A0")->capture_default_str();
    calib->add_option("--alpha", calib_alpha, "Weight on the running variance")->capture_default_str();
    calib->add_option("--output", calib_output, "Output JSON")->capture_default_str();

    // forecast
    auto* forecast = app.add_subcommand("forecast", "h-step forecast of squared returns");
    InputFlags fc_in;
    GridFlags fc_grid;
    std::string fc_method = "novas";
    std::string fc_variant = "GE";
    double fc_alpha = 0.5;
    std::size_t fc_horizon = 1;
    std::size_t fc_paths = 5000;
    std::string fc_risk = "L2";
    std::string fc_statistic = "AGGREGATED_SQUARED";
    std::string fc_innovations = "mc";
    bool fc_freeze = false;
    std::string fc_output = "forecast.json";
    fc_in.attach(forecast);
    fc_grid.attach(forecast);
    forecast->add_option("--method", fc_method, "novas, garch-direct or garch-bootstrap")
        ->check(CLI::IsMember({"novas", "garch-direct", "garch-bootstrap"}))
        ->capture_default_str();
    forecast->add_option("--variant", fc_variant, "NoVaS variant")->capture_default_str();
    forecast->add_option("--alpha", fc_alpha, "Weight on the running variance")->capture_default_str();
    forecast->add_option("--horizon", fc_horizon, "Forecast horizon h")->capture_default_str();
    forecast->add_option("--paths", fc_paths, "Monte-Carlo paths M")->capture_default_str();
    forecast->add_option("--risk", fc_risk, "L1 (median) or L2 (mean)")->capture_default_str();
    forecast->add_option("--statistic", fc_statistic, "SQUARED_STEP or AGGREGATED_SQUARED")->capture_default_str();
    forecast->add_option("--innovations", fc_innovations, "mc (trimmed normal) or boot (residuals)")
        ->capture_default_str();
    forecast->add_flag("--freeze-variance", fc_freeze, "Hold s^2_n fixed along simulated paths");
    forecast->add_option("--output", fc_output, "Output JSON")->capture_default_str();
    add_seed(forecast);

    // backtest
    auto* backtest = app.add_subcommand("backtest", "Rolling pseudo-out-of-sample comparison");
    InputFlags bt_in;
    GridFlags bt_grid;
    std::size_t bt_window = 250;
    std::string bt_horizons = "1,5,30";
    std::string bt_alphas = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8";
    std::string bt_variants = "all";
    std::size_t bt_paths = 5000;
    std::string bt_risk = "both";
    std::string bt_innovations = "both";
    std::string bt_metric = "squared";
    std::size_t bt_threads = 0;
    bool bt_no_boot = false;
    bool bt_per_method = false;
    bool bt_freeze = false;
    bool bt_table = false;
    std::string bt_label;
    std::string bt_output = "report.csv";
    bt_in.attach(backtest);
    bt_grid.attach(backtest);
    backtest->add_option("--window", bt_window, "Rolling window length")->capture_default_str();
    backtest->add_option("--horizons", bt_horizons, "Comma-separated horizons")->capture_default_str();
    backtest->add_option("--alpha-grid", bt_alphas, "Comma-separated alpha values")->capture_default_str();
    backtest->add_option("--variants", bt_variants, "Comma-separated variants or 'all'")->capture_default_str();
    backtest->add_option("--paths", bt_paths, "Monte-Carlo paths M")->capture_default_str();
    backtest->add_option("--risk", bt_risk, "L1, L2 or both")->capture_default_str();
    backtest->add_option("--innovations", bt_innovations, "mc, boot or both")->capture_default_str();
    backtest->add_option("--metric", bt_metric, "squared or literal")
        ->check(CLI::IsMember({"squared", "literal"}))
        ->capture_default_str();
    backtest->add_option("--threads", bt_threads, "Worker threads (0: all cores)")->capture_default_str();
    backtest->add_flag("--no-garch-bootstrap", bt_no_boot, "Skip the GARCH-bootstrap methods");
    backtest->add_flag("--per-method-windows", bt_per_method, "Score each method on its own origins");
    backtest->add_flag("--freeze-variance", bt_freeze, "Hold s^2_n fixed along simulated paths");
    backtest->add_flag("--table", bt_table, "Print the family-best ratio table");
    backtest->add_option("--label", bt_label, "Row label prefix for the table (e.g. M1)");
    backtest->add_option("--output", bt_output, "Report CSV (JSON report written alongside)")->capture_default_str();
    add_seed(backtest);

    // report
    auto* report = app.add_subcommand("report", "Render a backtest report and its prediction/truth pairs");
    std::string rp_input;
    std::string rp_output = "pairs.csv";
    std::string rp_label;
    report->add_option("--input", rp_input, "Report JSON written by backtest")->required()->check(CLI::ExistingFile);
    report->add_option("--output", rp_output, "Pairs CSV")->capture_default_str();
    report->add_option("--label", rp_label, "Row label prefix for the table");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        std::string command;
        json cfg;
        if (!from_sidecar.empty()) {
            if (!app.get_subcommands().empty()) throw InvalidInput("--from-sidecar replaces the subcommand");
            const json sidecar = read_json(from_sidecar);
            command = sidecar.at("command").get<std::string>();
            cfg = sidecar.at("config");
            if (!override_output.empty()) cfg["output"] = override_output;
        } else if (simulate->parsed()) {
            command = "simulate";
            cfg = {{"model", model}, {"n", n}, {"burn_in", burn_in}, {"t_unit_variance", t_unit},
                   {"seed", seed},   {"output", sim_output}};
        } else if (calib->parsed()) {
            command = "calibrate";
            calib_in.resolve(cfg);
            cfg["variant"] = std::string(to_string(parse_variant(calib_variant)));
            cfg["alpha"] = calib_alpha;
            cfg["grid"] = calib_grid.resolve(calib);
            cfg["output"] = calib_output;
        } else if (forecast->parsed()) {
            command = "forecast";
            fc_in.resolve(cfg);
            cfg["method"] = fc_method;
            cfg["variant"] = std::string(to_string(parse_variant(fc_variant)));
            cfg["alpha"] = fc_alpha;
            cfg["horizon"] = fc_horizon;
            cfg["paths"] = fc_paths;
            cfg["risk"] = std::string(to_string(parse_risk(fc_risk)));
            cfg["statistic"] = std::string(to_string(parse_statistic(fc_statistic)));
            cfg["innovations"] = std::string(to_string(parse_innovation_kind(fc_innovations)));
            cfg["freeze_variance"] = fc_freeze;
            cfg["grid"] = fc_grid.resolve(forecast);
            cfg["seed"] = seed;
            cfg["output"] = fc_output;
        } else if (backtest->parsed()) {
            command = "backtest";
            bt_in.resolve(cfg);
            cfg["window"] = bt_window;
            std::vector<std::size_t> horizons;
            for (const auto& h : split_list(bt_horizons)) horizons.push_back(std::stoul(h));
            cfg["horizons"] = horizons;
            std::vector<double> alphas;
            for (const auto& a : split_list(bt_alphas)) alphas.push_back(std::stod(a));
            cfg["alpha_grid"] = alphas;
            json variants = json::array();
            for (const auto& v : expand(bt_variants, {"GE", "GE_NO_A0", "GA", "GA_NO_A0"})) {
                variants.push_back(std::string(to_string(parse_variant(v))));
            }
            cfg["variants"] = variants;
            json risks = json::array();
            for (const auto& r : expand(bt_risk, {"L1", "L2"})) risks.push_back(std::string(to_string(parse_risk(r))));
            cfg["risks"] = risks;
            json kinds = json::array();
            for (const auto& k : expand(bt_innovations, {"mc", "boot"})) {
                kinds.push_back(std::string(to_string(parse_innovation_kind(k))));
            }
            cfg["innovations"] = kinds;
            cfg["garch_bootstrap"] = !bt_no_boot;
            cfg["paths"] = bt_paths;
            cfg["metric"] = bt_metric;
            cfg["threads"] = bt_threads;
            cfg["common_window"] = !bt_per_method;
            cfg["freeze_variance"] = bt_freeze;
            cfg["table"] = bt_table;
            cfg["label"] = bt_label;
            cfg["grid"] = bt_grid.resolve(backtest);
            cfg["seed"] = seed;
            cfg["output"] = bt_output;
        } else if (report->parsed()) {
            command = "report";
            cfg = {{"input", rp_input}, {"output", rp_output}, {"label", rp_label}};
        } else {
            std::cerr << app.help();
            return 1;
        }
        execute(command, cfg);
    } catch (const Error& e) {
        std::cerr << "error: " << e.category() << ": " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid-input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << '\n';
        return 3;
    }
    return 0;
}

}  // namespace novas::cli
