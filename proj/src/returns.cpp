#include "novas/returns.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "novas/error.hpp"

namespace novas {

const char* to_string(Infeasibility kind) noexcept {
    switch (kind) {
        case Infeasibility::NegativeA0: return "negative-a0";
        case Infeasibility::TrimBound: return "trim-bound";
        case Infeasibility::Dominance: return "dominance";
        case Infeasibility::ShapeDomain: return "shape-domain";
    }
    return "unknown";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string_view rest(line);
    for (;;) {
        const auto comma = rest.find(',');
        cells.push_back(trim(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest.remove_prefix(comma + 1);
    }
    return cells;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && std::isfinite(out);
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;
};

Table read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    Table table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (table.header.empty()) {
            table.header = split_row(line);
            continue;
        }
        table.rows.push_back(split_row(line));
        table.line_numbers.push_back(line_no);
    }
    if (table.header.empty()) throw InvalidInput("'" + path + "' has no header row");
    return table;
}

std::size_t column_index(const Table& table, const std::string& column, const std::string& path) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == column) return i;
    }
    throw InvalidInput("'" + path + "' has no column '" + column + "'");
}

}  // namespace

PriceSeries load_price_csv(const std::string& path, const std::string& column) {
    const Table table = read_table(path);
    const std::size_t col = column_index(table, column, path);
    PriceSeries out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string cell = col < row.size() ? row[col] : std::string{};
        double price = 0.0;
        if (!parse_double(cell, price) || price <= 0.0) {
            throw InvalidInput("'" + path + "' line " + std::to_string(table.line_numbers[r]) + ": price '" + cell +
                               "' is not a positive number");
        }
        out.timestamps.push_back(row.empty() || col == 0 ? std::to_string(r + 1) : row[0]);
        out.prices.push_back(price);
    }
    if (out.prices.size() < 2) throw InvalidInput("'" + path + "' has fewer than 2 prices");
    return out;
}

ReturnSeries load_return_csv(const std::string& path, const std::string& column) {
    const Table table = read_table(path);
    const std::size_t col = column_index(table, column, path);
    ReturnSeries out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string cell = col < row.size() ? row[col] : std::string{};
        double value = 0.0;
        if (!parse_double(cell, value)) {
            throw InvalidInput("'" + path + "' line " + std::to_string(table.line_numbers[r]) + ": return '" + cell +
                               "' is not a number");
        }
        out.values.push_back(value);
    }
    if (out.values.empty()) throw InvalidInput("'" + path + "' has no returns");
    return out;
}

ReturnSeries to_log_returns(const PriceSeries& p) {
    if (p.prices.size() < 2) throw InvalidInput("need at least 2 prices for log-returns");
    ReturnSeries out;
    out.values.reserve(p.prices.size() - 1);
    for (std::size_t t = 0; t + 1 < p.prices.size(); ++t) {
        if (!(p.prices[t] > 0.0) || !(p.prices[t + 1] > 0.0)) {
            throw InvalidInput("price at index " + std::to_string(p.prices[t] > 0.0 ? t + 1 : t) + " is not positive");
        }
        out.values.push_back(100.0 * std::log(p.prices[t + 1] / p.prices[t]));
    }
    return out;
}

double running_variance(std::span<const double> y, std::size_t t) {
    if (t < 3) throw InvalidInput("running_variance needs at least 2 observations (t >= 3)");
    const std::size_t count = t - 1;
    if (count > y.size()) throw InvalidInput("running_variance window exceeds series length");
    double mu = 0.0;
    for (std::size_t i = 0; i < count; ++i) mu += y[i];
    mu /= static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) ss += (y[i] - mu) * (y[i] - mu);
    return ss / static_cast<double>(count);
}

std::vector<double> running_variance_path(std::span<const double> y) {
    std::vector<double> out(y.size() + 1, 0.0);
    RunningVariance acc;
    for (std::size_t k = 0; k < y.size(); ++k) {
        acc.push(y[k]);
        out[k + 1] = acc.variance();
    }
    return out;
}

double sample_kurtosis(std::span<const double> w) {
    if (w.size() < 4) throw InvalidInput("kurtosis needs at least 4 values");
    double mu = 0.0;
    for (double v : w) mu += v;
    mu /= static_cast<double>(w.size());
    double m2 = 0.0;
    double m4 = 0.0;
    for (double v : w) {
        const double d2 = (v - mu) * (v - mu);
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= static_cast<double>(w.size());
    m4 /= static_cast<double>(w.size());
    if (!(m2 > 0.0)) throw DegenerateInput("kurtosis undefined for zero-variance input");
    return m4 / (m2 * m2);
}

}  // namespace novas
