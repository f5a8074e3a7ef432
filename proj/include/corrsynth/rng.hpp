#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "corrsynth/errors.hpp"

namespace corrsynth {

using rng_engine = std::mt19937_64;

/// splitmix64 finalizer. Used to mix seed material; one call advances the
/// state by the golden-ratio increment and returns the scrambled word.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Derive a child seed from a master seed and an ordered list of integer
/// labels (point index, replication index, stage id, ...). Every task in a
/// campaign gets its own engine this way, so results do not depend on how
/// work is scheduled across threads.
template <typename... Parts>
std::uint64_t derive_seed(std::uint64_t master, Parts... parts) {
    std::uint64_t h = splitmix64(master);
    ((h = splitmix64(h ^ static_cast<std::uint64_t>(parts))), ...);
    return h;
}

inline rng_engine make_engine(std::uint64_t seed) {
    return rng_engine(seed);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(rng_engine& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; never returns exactly zero.
inline double uniform01_open(rng_engine& gen) {
    return (static_cast<double>(gen() >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection-free modulo is fine here: n is tiny
/// compared to 2^64, the bias is far below anything the statistics can see.
inline std::size_t uniform_index(rng_engine& gen, std::size_t n) {
    if (n == 0) throw parameter_error("uniform_index: empty range");
    return static_cast<std::size_t>(gen() % n);
}

/// Sample an index proportionally to non-negative weights. `cumulative` must
/// be the inclusive prefix sum of the weights with a positive total.
inline std::size_t sample_cumulative(std::span<const double> cumulative, double u01) {
    if (cumulative.empty()) throw parameter_error("sample_cumulative: empty weights");
    const double total = cumulative.back();
    if (!(total > 0.0)) throw parameter_error("sample_cumulative: total weight must be positive");
    const double target = u01 * total;
    std::size_t lo = 0;
    std::size_t hi = cumulative.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (cumulative[mid] <= target)
            lo = mid + 1;
        else
            hi = mid;
    }
    return lo;
}

} // namespace corrsynth
