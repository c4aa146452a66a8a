#pragma once

// Non-sequential baseline point generators on [0,1]^s.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/random/sobol.hpp>

#include "sequd/design.hpp"
#include "sequd/detail/rng.hpp"

namespace sequd {

enum class SamplerKind { grid, random, lhs, sobol };

inline SamplerKind parse_sampler(const std::string& s) {
    if (s == "grid") return SamplerKind::grid;
    if (s == "random") return SamplerKind::random;
    if (s == "lhs") return SamplerKind::lhs;
    if (s == "sobol") return SamplerKind::sobol;
    throw std::invalid_argument("unknown sampler \"" + s + "\"");
}

/// a x b lattice with a*b = n and |a-b| minimal; a <= b.
inline std::pair<std::size_t, std::size_t> grid_shape(std::size_t n) {
    if (n < 1) throw std::invalid_argument("grid_shape: n must be >= 1");
    std::size_t a = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (a * a > n) --a;
    while ((a + 1) * (a + 1) <= n) ++a;
    while (n % a != 0) --a;
    return {a, n / a};
}

inline UnitDesign sample_random(std::size_t n, std::size_t s, std::uint64_t seed) {
    Rng rng(seed);
    UnitDesign x(n, s);
    for (double& v : x.data()) v = uniform01(rng);
    return x;
}

/// One point per stratum [k/n, (k+1)/n) in every dimension.
inline UnitDesign sample_lhs(std::size_t n, std::size_t s, std::uint64_t seed) {
    Rng rng(seed);
    UnitDesign x(n, s);
    std::vector<std::size_t> perm(n);
    const double width = 1.0 / static_cast<double>(n);
    for (std::size_t c = 0; c < s; ++c) {
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        for (std::size_t r = 0; r < n; ++r) {
            const double lo = static_cast<double>(perm[r]) * width;
            // Keep the draw strictly below the stratum's upper edge.
            x(r, c) = std::min(lo + uniform01(rng) * width, std::nextafter(lo + width, lo));
        }
    }
    return x;
}

/// Unscrambled Sobol points 1..n (the all-zero point 0 is skipped), Joe-Kuo direction numbers.
inline UnitDesign sample_sobol(std::size_t n, std::size_t s) {
    boost::random::sobol_engine<std::uint32_t, 32> engine(s);
    UnitDesign x(n, s);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < s; ++c) x(r, c) = std::ldexp(static_cast<double>(engine()), -32);
    }
    return x;
}

/// Cell-midpoint lattice in 2-D; x1 varies slowest.
inline UnitDesign sample_grid(std::size_t n, std::size_t s) {
    if (s != 2) throw std::invalid_argument("grid sampling is only defined for s = 2");
    const auto [a, b] = grid_shape(n);
    UnitDesign x(a * b, 2);
    std::size_t r = 0;
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t k = 0; k < b; ++k, ++r) {
            x(r, 0) = (static_cast<double>(i) + 0.5) / static_cast<double>(a);
            x(r, 1) = (static_cast<double>(k) + 0.5) / static_cast<double>(b);
        }
    }
    return x;
}

inline UnitDesign sample(SamplerKind kind, std::size_t n, std::size_t s, std::uint64_t seed) {
    if (n < 1 || s < 1) throw std::invalid_argument("sample: n and s must be >= 1");
    switch (kind) {
        case SamplerKind::grid: return sample_grid(n, s);
        case SamplerKind::random: return sample_random(n, s, seed);
        case SamplerKind::lhs: return sample_lhs(n, s, seed);
        case SamplerKind::sobol: return sample_sobol(n, s);
    }
    throw std::invalid_argument("sample: unknown sampler");
}

}  // namespace sequd
