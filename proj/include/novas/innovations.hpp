#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "novas/rng.hpp"

namespace novas {

struct CalibratedTransform;

enum class InnovationKind { TRIMMED_NORMAL, EMPIRICAL };

std::string_view to_string(InnovationKind k) noexcept;
InnovationKind parse_innovation_kind(std::string_view text);  // "mc" / "boot" or the enum names

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Generator of future innovations W*.
class InnovationSource {
public:
    static InnovationSource trimmed_normal(double bound = kUnbounded);
    static InnovationSource empirical(std::vector<double> pool);

    /// Trimmed normal at the transform's bound, or the transform's residuals.
    static InnovationSource for_transform(const CalibratedTransform& ct, InnovationKind kind);

    InnovationKind kind() const noexcept { return kind_; }
    double bound() const noexcept { return bound_; }
    std::span<const double> pool() const noexcept { return pool_; }

    /// Fills `out` from the caller's generator.
    void draw(Rng& rng, std::span<double> out) const;

private:
    InnovationSource(InnovationKind kind, double bound, std::vector<double> pool)
        : kind_(kind), bound_(bound), pool_(std::move(pool)) {}

    InnovationKind kind_;
    double bound_;
    std::vector<double> pool_;
};

/// N(0,1) conditioned on |w| <= bound, by rejection. An infinite bound gives
/// plain N(0,1).
std::vector<double> sample_trimmed_normal(double bound, std::size_t count, Seed seed);

/// i.i.d. uniform draws with replacement from `pool`.
std::vector<double> sample_empirical(std::span<const double> pool, std::size_t count, Seed seed);

}  // namespace novas
