#pragma once

#include <cstdint>

namespace epigraphon {

// Counter-based uniform draws. Algorithm name recorded in outputs: "splitmix64-counter".
// The draw for counter c under seed s is
//     u = (mix64(mix64(s) ^ c) >> 11) * 2^-53
// where mix64 is the SplitMix64 finalizer. Each edge/pair index gets its own
// counter, so draws are independent of thread count and evaluation order.

inline constexpr const char* kRngAlgorithm = "splitmix64-counter";

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Uniform double in [0, 1) for the given seed and counter.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) noexcept {
    return static_cast<double>(mix64(mix64(seed) ^ counter) >> 11) * 0x1.0p-53;
}

/// Index of the unordered pair (i, j), i > j, in row-major lower-triangular order.
constexpr std::uint64_t pair_index(std::uint64_t i, std::uint64_t j) noexcept {
    return i * (i - 1) / 2 + j;
}

}  // namespace epigraphon
