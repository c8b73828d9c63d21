#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / "novas_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args, const std::string& capture = "", const std::string& env = "") {
    std::string cmd = "cd '" + workdir().string() + "' && " + env + " " + std::string(NOVAS_CLI_PATH) + " " + args;
    if (!capture.empty()) cmd += " >'" + capture + "' 2>&1";
    else cmd += " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_CASE("simulate writes returns and a sidecar") {
    REQUIRE(run("simulate --model M3 --n 500 --seed 7") == 0);
    const auto csv = slurp(workdir() / "returns.csv");
    CHECK(csv.rfind("index,return\n", 0) == 0);
    CHECK(count_lines(csv) == 501);
    const auto sidecar = nlohmann::json::parse(slurp(workdir() / "returns.sidecar.json"));
    CHECK(sidecar["command"] == "simulate");
    CHECK(sidecar["config"]["seed"] == 7);
    CHECK(sidecar["config"]["burn_in"] == 500);

    REQUIRE(run("--from-sidecar returns.sidecar.json --output replay.csv") == 0);
    CHECK(slurp(workdir() / "replay.csv") == csv);
}

TEST_CASE("calibrate and forecast replay byte-identically") {
    REQUIRE(run("simulate --model M4 --n 300 --seed 2 --output m4.csv") == 0);
    REQUIRE(run("calibrate --input m4.csv --variant ga-no-a0 --alpha 0.6 --output cal.json") == 0);
    const auto cal = nlohmann::json::parse(slurp(workdir() / "cal.json"));
    CHECK(cal["weights"]["variant"] == "GA_NO_A0");

    REQUIRE(run("forecast --input m4.csv --variant GE --alpha 0.7 --horizon 5 --paths 300 --risk L1 "
                "--innovations boot --seed 9 --output fc.json") == 0);
    const auto fc = nlohmann::json::parse(slurp(workdir() / "fc.json"));
    for (const char* key : {"method", "variant", "alpha", "horizon", "risk", "statistic", "point", "ensemble_mean",
                            "ensemble_median", "M", "seed"}) {
        CHECK(fc.contains(key));
    }
    CHECK(fc["point"] == fc["ensemble_median"]);
    CHECK(fc["M"] == 300);
    REQUIRE(run("--from-sidecar fc.sidecar.json --output fc2.json") == 0);
    CHECK(slurp(workdir() / "fc2.json") == slurp(workdir() / "fc.json"));

    REQUIRE(run("forecast --input m4.csv --method garch-direct --horizon 3 --output gd.json") == 0);
    REQUIRE(run("forecast --input m4.csv --method garch-bootstrap --horizon 3 --paths 200 --output gb.json") == 0);
}

TEST_CASE("seed comes from the environment unless given") {
    REQUIRE(run("simulate --model M3 --n 100 --output env.csv") == 0);
    const auto base = slurp(workdir() / "env.csv");
    REQUIRE(run("simulate --model M3 --n 100 --seed 0 --output zero.csv") == 0);
    CHECK(slurp(workdir() / "zero.csv") == base);
    REQUIRE(run("simulate --model M3 --n 100 --output env5.csv", "", "NOVAS_SEED=5") == 0);
    const auto env5 = nlohmann::json::parse(slurp(workdir() / "env5.sidecar.json"));
    CHECK(env5["config"]["seed"] == 5);
    CHECK(slurp(workdir() / "env5.csv") != base);
    REQUIRE(run("simulate --model M3 --n 100 --seed 0 --output flag.csv", "", "NOVAS_SEED=5") == 0);
    CHECK(slurp(workdir() / "flag.csv") == base);
}

TEST_CASE("config file values yield to flags") {
    std::ofstream(workdir() / "sim.ini") << "[simulate]\nmodel = \"M8\"\nn = 120\nseed = 3\n";
    REQUIRE(run("--config sim.ini simulate --n 90 --output cfg.csv") == 0);
    const auto sidecar = nlohmann::json::parse(slurp(workdir() / "cfg.sidecar.json"));
    CHECK(sidecar["config"]["model"] == "M8");
    CHECK(sidecar["config"]["n"] == 90);
    CHECK(sidecar["config"]["seed"] == 3);
}

TEST_CASE("backtest reports the rolling prediction counts") {
    REQUIRE(run("simulate --model M3 --n 499 --seed 1 --output bt.csv") == 0);
    REQUIRE(run("backtest --input bt.csv --window 250 --horizons 1,5,30 --alpha-grid 0.8 --variants GE_NO_A0 "
                "--risk L2 --innovations boot --paths 100 --no-garch-bootstrap --table --label M3 "
                "--output report.csv",
                (workdir() / "table.txt").string()) == 0);
    std::istringstream csv(slurp(workdir() / "report.csv"));
    std::string line;
    std::getline(csv, line);
    std::map<std::string, std::string> counts;
    while (std::getline(csv, line)) {
        const auto last = line.rfind(',');
        auto head = line.substr(0, last);
        head = head.substr(0, head.rfind(','));
        head = head.substr(0, head.rfind(','));
        const auto horizon = head.substr(head.rfind(',') + 1);
        counts[horizon] = line.substr(last + 1);
    }
    CHECK(counts["1"] == "249");
    CHECK(counts["5"] == "245");
    CHECK(counts["30"] == "220");
    CHECK(slurp(workdir() / "table.txt").find("M3-30steps") != std::string::npos);

    REQUIRE(run("report --input report.report.json --label M3 --output pairs.csv", (workdir() / "report.txt").string()) == 0);
    CHECK(count_lines(slurp(workdir() / "pairs.csv")) > 249);
    CHECK(slurp(workdir() / "report.txt") == slurp(workdir() / "table.txt"));
}

TEST_CASE("errors exit nonzero with a category") {
    CHECK(run("simulate --model M3 --bogus") != 0);
    CHECK(run("calibrate --input missing.csv", (workdir() / "err.txt").string()) != 0);
    CHECK(slurp(workdir() / "err.txt").rfind("error: io: ", 0) == 0);
    std::ofstream(workdir() / "bad.csv") << "close\n100\n-3\n";
    CHECK(run("calibrate --input bad.csv --input-kind prices", (workdir() / "err2.txt").string()) != 0);
    CHECK(slurp(workdir() / "err2.txt").rfind("error: invalid-input: ", 0) == 0);
    CHECK(run("simulate --model M42", (workdir() / "err3.txt").string()) != 0);
    CHECK(count_lines(slurp(workdir() / "err3.txt")) == 1);
}
