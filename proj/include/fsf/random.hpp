#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <utility>

namespace fsf {

// std::mt19937_64 output is fixed by the standard, but the distributions and
// std::shuffle are not. These helpers keep seeded results identical across
// standard library implementations.
using Rng = std::mt19937_64;

/// Uniform integer in [0, bound). bound must be > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_index(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

/// Moves a uniformly random `count`-subset to the front of `items`
/// (partial Fisher-Yates). Requires count <= items.size().
template <typename T>
void partial_shuffle(std::span<T> items, std::size_t count, Rng& rng) {
    for (std::size_t i = 0; i < count; ++i) {
        const auto j = i + static_cast<std::size_t>(uniform_index(rng, items.size() - i));
        std::swap(items[i], items[j]);
    }
}

} // namespace fsf
