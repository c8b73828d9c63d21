#include "novas/innovations.hpp"

#include <cmath>
#include <string>

#include "novas/calibrate.hpp"
#include "novas/error.hpp"

namespace novas {

namespace {

void fill_trimmed(Rng& rng, double bound, std::span<double> out) {
    std::normal_distribution<double> normal(0.0, 1.0);
    for (double& v : out) {
        double draw = normal(rng);
        while (std::abs(draw) > bound) draw = normal(rng);
        v = draw;
    }
}

void fill_empirical(Rng& rng, std::span<const double> pool, std::span<double> out) {
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (double& v : out) v = pool[pick(rng)];
}

}  // namespace

std::string_view to_string(InnovationKind k) noexcept {
    return k == InnovationKind::TRIMMED_NORMAL ? "mc" : "boot";
}

InnovationKind parse_innovation_kind(std::string_view text) {
    if (text == "mc" || text == "TRIMMED_NORMAL") return InnovationKind::TRIMMED_NORMAL;
    if (text == "boot" || text == "EMPIRICAL") return InnovationKind::EMPIRICAL;
    throw InvalidInput("unknown innovation kind '" + std::string(text) + "' (expected mc or boot)");
}

InnovationSource InnovationSource::trimmed_normal(double bound) {
    if (std::isfinite(bound) && bound < 3.0 - 1e-12) {
        throw InvalidInput("trimming bound " + std::to_string(bound) + " is below 3");
    }
    return InnovationSource(InnovationKind::TRIMMED_NORMAL, bound, {});
}

InnovationSource InnovationSource::empirical(std::vector<double> pool) {
    if (pool.empty()) throw InvalidInput("empirical innovation pool is empty");
    return InnovationSource(InnovationKind::EMPIRICAL, kUnbounded, std::move(pool));
}

InnovationSource InnovationSource::for_transform(const CalibratedTransform& ct, InnovationKind kind) {
    if (kind == InnovationKind::EMPIRICAL) return empirical(ct.residuals);
    return trimmed_normal(ct.weights.trim_bound());
}

void InnovationSource::draw(Rng& rng, std::span<double> out) const {
    if (kind_ == InnovationKind::EMPIRICAL) {
        fill_empirical(rng, pool_, out);
    } else {
        fill_trimmed(rng, bound_, out);
    }
}

std::vector<double> sample_trimmed_normal(double bound, std::size_t count, Seed seed) {
    if (!(bound > 0.0)) throw InvalidInput("trimming bound must be positive");
    std::vector<double> out(count);
    Rng rng = make_rng(seed);
    fill_trimmed(rng, bound, out);
    return out;
}

std::vector<double> sample_empirical(std::span<const double> pool, std::size_t count, Seed seed) {
    if (pool.empty()) throw InvalidInput("empirical innovation pool is empty");
    std::vector<double> out(count);
    Rng rng = make_rng(seed);
    fill_empirical(rng, pool, out);
    return out;
}

}  // namespace novas
