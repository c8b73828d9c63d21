#pragma once

// Slow, definition-level reference computations used to cross-check the
// library. Nothing here calls into novas.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

inline double centred_variance(const std::vector<double>& y, std::size_t count) {
    if (count < 2) return 0.0;
    double mu = 0.0;
    for (std::size_t i = 0; i < count; ++i) mu += y[i];
    mu /= static_cast<double>(count);
    double ss = 0.0;
    for (std::size_t i = 0; i < count; ++i) ss += (y[i] - mu) * (y[i] - mu);
    return ss / static_cast<double>(count);
}

inline double kurtosis(const std::vector<double>& w) {
    double mu = 0.0;
    for (double v : w) mu += v;
    mu /= static_cast<double>(w.size());
    double m2 = 0.0, m4 = 0.0;
    for (double v : w) {
        const double d = (v - mu) * (v - mu);
        m2 += d;
        m4 += d * d;
    }
    m2 /= static_cast<double>(w.size());
    m4 /= static_cast<double>(w.size());
    return m4 / (m2 * m2);
}

// W_t = Y_t / sqrt(alpha s2_{t-1} + a0 Y_t^2 + sum_i lags[i-1] Y_{t-i}^2),
// t = p+1..n, where s2_{t-1} is the two-pass variance of Y_1..Y_{t-1}.
inline std::vector<double> studentize(const std::vector<double>& y, double alpha, double a0_coef,
                                      const std::vector<double>& lags) {
    const std::size_t p = lags.size();
    std::vector<double> w;
    for (std::size_t t = p; t < y.size(); ++t) {
        double den = alpha * centred_variance(y, t) + a0_coef * y[t] * y[t];
        for (std::size_t i = 1; i <= p; ++i) den += lags[i - 1] * y[t - i] * y[t - i];
        w.push_back(y[t] / std::sqrt(den));
    }
    return w;
}

struct Candidate {
    double objective = 0.0;
    std::size_t order = 0;
    double a0 = 0.0;
    double c = 0.0;
    double a1 = 0.0;
    double b1 = 0.0;
    bool found = false;
};

inline bool better(const Candidate& x, const Candidate& best) {
    if (!best.found) return true;
    if (x.objective != best.objective) return x.objective < best.objective;
    if (x.order != best.order) return x.order < best.order;
    return x.a0 < best.a0;
}

// Exhaustive GE / GE-without-a0 search: c log-spaced, p the smallest order
// with tail mass below `tail`, capped.
inline Candidate search_ge(const std::vector<double>& y, double alpha, bool with_a0, std::size_t c_count,
                           double c_min, double c_max, double tail, std::size_t cap) {
    Candidate best;
    for (std::size_t j = 0; j < c_count; ++j) {
        const double c = c_min * std::pow(c_max / c_min, static_cast<double>(j) / static_cast<double>(c_count - 1));
        std::size_t p = cap;
        for (std::size_t q = 1; q <= cap; ++q) {
            if (std::exp(-c * static_cast<double>(q + 1)) < tail) {
                p = q;
                break;
            }
        }
        double total = 0.0;
        for (std::size_t i = with_a0 ? 0 : 1; i <= p; ++i) total += std::exp(-c * static_cast<double>(i));
        const double cp = (1.0 - alpha) / total;
        const double a0 = with_a0 ? cp : 0.0;
        if (a0 > 1.0 / 9.0) continue;
        std::vector<double> lags;
        for (std::size_t i = 1; i <= p; ++i) lags.push_back(cp * std::exp(-c * static_cast<double>(i)));
        Candidate x{std::fabs(kurtosis(studentize(y, alpha, a0, lags)) - 3.0), p, a0, c, 0.0, 0.0, true};
        if (better(x, best)) best = x;
    }
    return best;
}

// Exhaustive GA search over (a1, b1) at order q with a0 solved from the
// constraint a0/(1-b1) + alpha + sum = 1.
inline Candidate search_ga(const std::vector<double>& y, double alpha, double step, std::size_t q) {
    Candidate best;
    const auto count = static_cast<std::size_t>(std::floor((1.0 - 1e-12) / step));
    for (std::size_t ia = 1; ia <= count; ++ia) {
        const double a1 = step * static_cast<double>(ia);
        if (a1 >= 1.0) break;
        for (std::size_t ib = 1; ib <= count; ++ib) {
            const double b1 = step * static_cast<double>(ib);
            if (b1 >= 1.0) break;
            std::vector<double> lags;
            double sum = 0.0;
            for (std::size_t i = 0; i < q; ++i) {
                lags.push_back(a1 * std::pow(b1, static_cast<double>(i)));
                sum += lags.back();
            }
            const double a0 = (1.0 - alpha - sum) * (1.0 - b1);
            const double eff = a0 / (1.0 - b1);
            if (a0 < -1e-14 || eff > 1.0 / 9.0 + 1e-14 || eff < a1 - 1e-14) continue;
            Candidate x{std::fabs(kurtosis(studentize(y, alpha, eff, lags)) - 3.0), q, a0, 0.0, a1, b1, true};
            if (better(x, best)) best = x;
        }
    }
    return best;
}

// GA without a0: a1 re-solved so that alpha + sum(lags) = 1.
inline Candidate search_ga_no_a0(const std::vector<double>& y, double alpha, double step, std::size_t q) {
    Candidate best;
    const auto count = static_cast<std::size_t>(std::floor((1.0 - 1e-12) / step));
    for (std::size_t ib = 1; ib <= count; ++ib) {
        const double b1 = step * static_cast<double>(ib);
        if (b1 >= 1.0) break;
        double geo = 0.0;
        for (std::size_t i = 0; i < q; ++i) geo += std::pow(b1, static_cast<double>(i));
        const double a1 = (1.0 - alpha) / geo;
        std::vector<double> lags;
        for (std::size_t i = 0; i < q; ++i) lags.push_back(a1 * std::pow(b1, static_cast<double>(i)));
        Candidate x{std::fabs(kurtosis(studentize(y, alpha, 0.0, lags)) - 3.0), q, 0.0, 0.0, a1, b1, true};
        if (better(x, best)) best = x;
    }
    return best;
}

}  // namespace oracle
