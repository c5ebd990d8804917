#pragma once

#include <cstdint>
#include <initializer_list>

namespace gammalab {

/// SplitMix64 finalizer. Used as a counter-based generator: the value for a
/// key depends only on the key, never on how many draws happened before.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Fold a sequence of integer keys into a seed.
inline std::uint64_t mix_keys(std::uint64_t seed, std::initializer_list<std::int64_t> keys) {
    std::uint64_t h = splitmix64(seed);
    for (std::int64_t k : keys) h = splitmix64(h ^ static_cast<std::uint64_t>(k));
    return h;
}

/// Uniform double in [0,1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace gammalab
