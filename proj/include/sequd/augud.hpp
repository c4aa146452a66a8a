#pragma once

// Augmented uniform design construction by threshold-accepting element-wise
// exchange. Plain uniform-design construction is the empty-fixed special case.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sequd/design.hpp"
#include "sequd/detail/rng.hpp"
#include "sequd/discrepancy.hpp"

namespace sequd {

struct AugudConfig {
    double gamma = 0.005;  ///< initial threshold = gamma * CD2^2 of the starting design
    double eta = 0.1;      ///< hit-ratio target
    double alpha = 0.8;    ///< threshold scaling factor
    int m_outer = 50;
    int m_inner = 100;
    std::optional<int> m_exchange;  ///< overrides exchange_budget() when set
    int restarts = 1;
    std::uint64_t seed = 0;

    void validate() const {
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("augud: alpha must lie in (0,1)");
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("augud: eta must lie in [0,1]");
        if (!(gamma > 0.0)) throw std::invalid_argument("augud: gamma must be positive");
        if (m_outer < 1 || m_inner < 1 || restarts < 1) {
            throw std::invalid_argument("augud: loop and restart counts must be >= 1");
        }
        if (m_exchange && *m_exchange < 1) throw std::invalid_argument("augud: m_exchange must be >= 1");
    }
};

/// How the free block's level multiset is chosen.
///  - strict: fixed + free must form a balanced U-type design (error otherwise).
///  - relaxed: fill the least-used levels of each column first; used when the
///    fixed block comes from snapped history points and cannot be balanced.
enum class BalancePolicy { strict, relaxed };

struct AugudResult {
    LevelDesign design;         ///< the free block
    double combined_cd2 = 0.0;  ///< root CD2 of [fixed; design]
    std::size_t iterations = 0; ///< exchanges actually applied
    int restart_index = 0;
};

/// Starting free block whose per-column level counts complement the fixed block.
inline LevelDesign init_augmented(const LevelDesign& fixed, std::size_t n2, std::size_t s, int q,
                                  std::uint64_t seed, BalancePolicy policy = BalancePolicy::strict) {
    if (n2 < 1 || s < 1 || q < 1) throw std::invalid_argument("init_augmented: n2, s and q must be >= 1");
    if (!fixed.empty() && fixed.factors() != s) {
        throw std::invalid_argument("init_augmented: fixed block has " + std::to_string(fixed.factors()) +
                                    " factors, expected " + std::to_string(s));
    }
    if (!fixed.empty() && fixed.levels() != q) {
        throw std::invalid_argument("init_augmented: fixed block uses a different level count");
    }
    const std::size_t n1 = fixed.runs();
    const std::size_t total = n1 + n2;
    const auto uq = static_cast<std::size_t>(q);
    if (policy == BalancePolicy::strict && total % uq != 0) {
        throw std::invalid_argument("init_augmented: n1 + n2 = " + std::to_string(total) +
                                    " is not divisible by q = " + std::to_string(q));
    }

    Rng rng(seed);
    LevelDesign free(n2, s, q);
    std::vector<int> column;
    column.reserve(n2);
    for (std::size_t c = 0; c < s; ++c) {
        std::vector<std::size_t> counts = fixed.empty() ? std::vector<std::size_t>(uq, 0) : fixed.column_counts(c);
        if (policy == BalancePolicy::strict) {
            const std::size_t target = total / uq;
            column.clear();
            for (std::size_t l = 0; l < uq; ++l) {
                if (counts[l] > target) {
                    throw std::invalid_argument("init_augmented: level " + std::to_string(l + 1) + " of column " +
                                                std::to_string(c) + " already appears " +
                                                std::to_string(counts[l]) + " times; combined balance needs " +
                                                std::to_string(target));
                }
                column.insert(column.end(), target - counts[l], static_cast<int>(l) + 1);
            }
        } else {
            // Water-filling: each slot goes to a least-used level; ties by a
            // per-column random priority so no end of the range is favoured.
            std::vector<std::size_t> priority(uq);
            for (std::size_t l = 0; l < uq; ++l) priority[l] = l;
            std::shuffle(priority.begin(), priority.end(), rng);
            std::vector<std::size_t> rank(uq);
            for (std::size_t i = 0; i < uq; ++i) rank[priority[i]] = i;
            column.clear();
            for (std::size_t slot = 0; slot < n2; ++slot) {
                std::size_t pick = 0;
                for (std::size_t l = 1; l < uq; ++l) {
                    if (counts[l] < counts[pick] || (counts[l] == counts[pick] && rank[l] < rank[pick])) pick = l;
                }
                ++counts[pick];
                column.push_back(static_cast<int>(pick) + 1);
            }
            std::sort(column.begin(), column.end());
        }
        std::shuffle(column.begin(), column.end(), rng);
        for (std::size_t r = 0; r < n2; ++r) free(r, c) = column[r];
    }
    return free;
}

/// Exchange candidates per inner iteration: max(1, floor(min(50, 0.2 n2^2 (q-1) / (2q)))).
inline int exchange_budget(std::size_t n2, int q) {
    if (n2 < 2) throw std::invalid_argument("exchange_budget: need at least two runs to exchange");
    if (q < 1) throw std::invalid_argument("exchange_budget: q must be >= 1");
    const double n = static_cast<double>(n2);
    const double raw = std::min(50.0, 0.2 * n * n * (q - 1.0) / (2.0 * q));
    return std::max(1, static_cast<int>(std::floor(raw)));
}

/// p = 1 - min(1, max(0, delta / threshold)).
inline double accept_probability(double delta, double threshold) {
    if (!(threshold > 0.0)) throw std::invalid_argument("accept_probability: threshold must be positive");
    return 1.0 - std::min(1.0, std::max(0.0, delta / threshold));
}

namespace detail {

struct RowPair {
    std::size_t a;
    std::size_t b;
};

// `count` distinct unordered row pairs out of `rows`, in sampling order.
inline void sample_pairs(std::size_t rows, std::size_t count, Rng& rng, std::vector<RowPair>& out) {
    out.clear();
    std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
    while (out.size() < count) {
        std::size_t a = pick(rng);
        std::size_t b = pick(rng);
        if (a == b) continue;
        if (a > b) std::swap(a, b);
        const bool seen = std::any_of(out.begin(), out.end(), [&](const RowPair& p) { return p.a == a && p.b == b; });
        if (!seen) out.push_back({a, b});
    }
}

}  // namespace detail

/// One threshold-accepting run from a single seed. run_augud() reduces over restarts.
inline AugudResult run_augud_single(const LevelDesign& fixed, std::size_t n2, std::size_t s, int q,
                                    const AugudConfig& cfg, std::uint64_t seed,
                                    BalancePolicy policy = BalancePolicy::strict) {
    Rng rng(seed);
    LevelDesign current = init_augmented(fixed, n2, s, q, rng(), policy);
    const std::size_t offset = fixed.runs();
    Cd2Cache cache(to_unit(fixed.vstack(current)));

    LevelDesign best = current;
    double best_sq = cache.squared();
    std::size_t applied = 0;

    if (n2 >= 2) {
        const std::size_t pair_count = n2 * (n2 - 1) / 2;
        const int budget = cfg.m_exchange ? *cfg.m_exchange : exchange_budget(n2, q);
        const std::size_t per_step = std::min(pair_count, static_cast<std::size_t>(budget));

        double threshold = cfg.gamma * cache.squared();
        if (!(threshold > 0.0)) threshold = 1e-12;

        std::vector<detail::RowPair> pairs;
        for (int outer = 1; outer <= cfg.m_outer; ++outer) {
            int hits = 0;
            for (int inner = 1; inner <= cfg.m_inner; ++inner) {
                const std::size_t col = static_cast<std::size_t>(inner) % s;
                detail::sample_pairs(n2, per_step, rng, pairs);

                std::size_t chosen = 0;
                double chosen_delta = 0.0;
                for (std::size_t i = 0; i < pairs.size(); ++i) {
                    const double d = cache.exchange_delta(col, offset + pairs[i].a, offset + pairs[i].b);
                    if (i == 0 || d < chosen_delta) {
                        chosen = i;
                        chosen_delta = d;
                    }
                }

                const double p = accept_probability(chosen_delta, threshold);
                const bool accept = p >= 1.0 || (p > 0.0 && uniform01(rng) < p);
                if (!accept) continue;
                ++hits;
                const auto [a, b] = pairs[chosen];
                if (current(a, col) == current(b, col)) continue;
                cache.commit_exchange(col, offset + a, offset + b);
                std::swap(current(a, col), current(b, col));
                ++applied;
                if (cache.squared() < best_sq) {
                    best_sq = cache.squared();
                    best = current;
                }
            }
            const double hit_ratio = static_cast<double>(hits) / cfg.m_inner;
            threshold = hit_ratio < cfg.eta ? threshold / cfg.alpha : threshold * cfg.alpha;
        }
    }

    AugudResult result;
    result.combined_cd2 = cd2(to_unit(fixed.vstack(best)));
    result.design = std::move(best);
    result.iterations = applied;
    return result;
}

/// Augments `fixed` with n2 runs minimizing the combined CD2. Restarts may run
/// concurrently; the winner is the smallest (combined_cd2, restart_index).
inline AugudResult run_augud(const LevelDesign& fixed, std::size_t n2, std::size_t s, int q,
                             const AugudConfig& cfg, BalancePolicy policy = BalancePolicy::strict) {
    cfg.validate();
    if (cfg.restarts == 1) return run_augud_single(fixed, n2, s, q, cfg, derive_seed(cfg.seed, 0), policy);

    std::vector<std::future<AugudResult>> runs;
    runs.reserve(static_cast<std::size_t>(cfg.restarts));
    for (int r = 0; r < cfg.restarts; ++r) {
        runs.push_back(std::async(std::launch::async, [&, r] {
            AugudResult res = run_augud_single(fixed, n2, s, q, cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(r)), policy);
            res.restart_index = r;
            return res;
        }));
    }
    std::optional<AugudResult> winner;
    for (auto& f : runs) {
        AugudResult res = f.get();
        if (!winner || res.combined_cd2 < winner->combined_cd2) winner = std::move(res);
    }
    return *std::move(winner);
}

/// Uniform design U_n(q^s): augmentation from an empty fixed block.
inline AugudResult construct_ud(std::size_t n, std::size_t s, int q, const AugudConfig& cfg) {
    check_shape(n, s, q);
    return run_augud(LevelDesign(0, s, q), n, s, q, cfg);
}

}  // namespace sequd
