#pragma once

#include <cstdint>

namespace betatri {

// Counter-based randomness built on the splitmix64 finalizer. Every draw is
// a pure function of its key, so edge draws and replicate seeds do not
// depend on evaluation order or thread count.

inline constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream key for the potential edge (i, j), i < j.
inline constexpr std::uint64_t edge_key(std::uint64_t seed, std::uint32_t i,
                                        std::uint32_t j) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(i) + 1));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(j) + 1));
    return h;
}

// Uniform in [0, 1) with 53 random bits.
inline constexpr double to_unit_interval(std::uint64_t bits) noexcept {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline constexpr double edge_uniform(std::uint64_t seed, std::uint32_t i,
                                     std::uint32_t j) noexcept {
    return to_unit_interval(edge_key(seed, i, j));
}

// Per-replicate seed for Monte Carlo runs: hash of (master_seed, n, r).
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t n,
                                           std::uint64_t replicate) noexcept {
    return splitmix64(splitmix64(master_seed ^ splitmix64(n)) ^ replicate);
}

} // namespace betatri
