#pragma once

#include <cstdint>
#include <random>

namespace novas {

struct Seed {
    std::uint64_t value = 0;
};

/// splitmix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Child stream seed for `index` under `parent`. For a fixed parent the map
/// index -> child is injective (mix64 is a bijection), so sub-seeds of
/// distinct indices never collide.
constexpr Seed derive_seed(Seed parent, std::uint64_t index) noexcept {
    return Seed{mix64(mix64(parent.value) ^ index)};
}

using Rng = std::mt19937_64;

inline Rng make_rng(Seed seed) { return Rng(seed.value); }

}  // namespace novas
