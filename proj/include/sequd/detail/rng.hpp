#pragma once

#include <cstdint>
#include <random>

namespace sequd {

using Rng = std::mt19937_64;

namespace detail {

// splitmix64 finalizer; used to derive independent child streams from one seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Seed for child stream `stream` of `base`. Distinct streams never share state.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
    return detail::mix64(detail::mix64(base) ^ (stream * 0xd1b54a32d192ed03ULL + 1));
}

inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace sequd
