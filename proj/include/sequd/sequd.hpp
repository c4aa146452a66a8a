#pragma once

// Sequential uniform-design optimization: a uniform design over the unit cube,
// then repeated zooming around the incumbent with halved spacing, snapping of
// already-evaluated points into the new grid, and augmentation of the grid
// with the remaining runs. SeqRand replaces the augmentation with uniform
// random draws inside the zoomed box.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sequd/augud.hpp"
#include "sequd/design.hpp"
#include "sequd/detail/rng.hpp"
#include "sequd/direction.hpp"
#include "sequd/history.hpp"
#include "sequd/param_space.hpp"

namespace sequd {

/// Runs and levels per stage for an s-dimensional search: n = q = 15 up to
/// five dimensions, 25 above.
constexpr std::pair<std::size_t, int> default_stage_size(std::size_t s) noexcept {
    return s <= 5 ? std::pair<std::size_t, int>{15, 15} : std::pair<std::size_t, int>{25, 25};
}

/// Level spacing at stage j: 1 / (2^(j-1) q).
inline double stage_spacing(int j, int q) { return std::ldexp(1.0 / static_cast<double>(q), -(j - 1)); }

/// q equally spaced levels around x_star at stage j (before shifting). For odd
/// q x_star is the middle level; for even q it sits at index (q-2)/2.
inline std::vector<double> zoom_levels(double x_star, int j, int q) {
    if (j < 2) throw std::invalid_argument("zoom_levels: stage must be >= 2");
    if (q < 1) throw std::invalid_argument("zoom_levels: q must be >= 1");
    const double sp = stage_spacing(j, q);
    const int centre = q % 2 == 1 ? (q - 1) / 2 : (q - 2) / 2;
    std::vector<double> levels(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) levels[static_cast<std::size_t>(k)] = x_star + (k - centre) * sp;
    return levels;
}

/// Translates a level set back into [0,1] without changing its spacing.
inline std::vector<double> shift_into_bounds(std::vector<double> levels, double spacing) {
    if (levels.empty()) return levels;
    const std::size_t q = levels.size();
    const double span = spacing * static_cast<double>(q - 1);
    if (span > 1.0 + 1e-12) throw std::invalid_argument("shift_into_bounds: level span exceeds the unit interval");
    if (levels.front() < 0.0) {
        for (std::size_t k = 0; k < q; ++k) levels[k] = static_cast<double>(k) * spacing;
    } else if (levels.back() > 1.0) {
        for (std::size_t k = 0; k < q; ++k) levels[k] = 1.0 - static_cast<double>(q - 1 - k) * spacing;
    }
    return levels;
}

struct SubspaceGrid {
    int stage = 1;
    double spacing = 1.0;
    std::vector<std::vector<double>> axes;  ///< per dimension, q ascending level values

    [[nodiscard]] std::size_t dimension() const noexcept { return axes.size(); }
    [[nodiscard]] int levels() const noexcept { return axes.empty() ? 0 : static_cast<int>(axes.front().size()); }

    /// Closed box holding every point that snaps onto this grid.
    [[nodiscard]] double lower(std::size_t d) const { return axes.at(d).front() - spacing / 2.0; }
    [[nodiscard]] double upper(std::size_t d) const { return axes.at(d).back() + spacing / 2.0; }

    [[nodiscard]] bool contains(std::span<const double> x) const {
        for (std::size_t d = 0; d < axes.size(); ++d) {
            if (x[d] < lower(d) || x[d] > upper(d)) return false;
        }
        return true;
    }

    /// Level index 1..q nearest to v along axis d; ties go to the lower level.
    [[nodiscard]] int snap(std::size_t d, double v) const {
        const double t = (v - axes.at(d).front()) / spacing;
        const double k = std::ceil(t - 0.5);
        return static_cast<int>(std::clamp(k, 0.0, static_cast<double>(levels() - 1))) + 1;
    }

    /// Unit coordinates of a level design laid out on this grid.
    [[nodiscard]] Matrix<double> map(const LevelDesign& d) const {
        Matrix<double> out(d.runs(), d.factors());
        for (std::size_t r = 0; r < d.runs(); ++r) {
            for (std::size_t c = 0; c < d.factors(); ++c) {
                out(r, c) = axes.at(c).at(static_cast<std::size_t>(d(r, c) - 1));
            }
        }
        return out;
    }
};

/// Stage-1 grid: the cell midpoints (2u-1)/(2q) of the unit cube.
inline SubspaceGrid initial_grid(std::size_t s, int q) {
    SubspaceGrid g;
    g.stage = 1;
    g.spacing = 1.0 / q;
    g.axes.assign(s, std::vector<double>(static_cast<std::size_t>(q)));
    for (auto& axis : g.axes) {
        for (int u = 1; u <= q; ++u) axis[static_cast<std::size_t>(u - 1)] = level_to_unit(u, q);
    }
    return g;
}

/// Zoomed and shifted grid around `centre` for stage j >= 2.
inline SubspaceGrid zoom_grid(std::span<const double> centre, int j, int q) {
    SubspaceGrid g;
    g.stage = j;
    g.spacing = stage_spacing(j, q);
    for (double x : centre) g.axes.push_back(shift_into_bounds(zoom_levels(x, j, q), g.spacing));
    return g;
}

struct SnapResult {
    LevelDesign fixed;
    std::size_t count = 0;
};

/// Every evaluated point inside the grid's box, snapped to its nearest levels.
inline SnapResult snap_existing(const History& history, const SubspaceGrid& grid) {
    const std::size_t s = grid.dimension();
    Matrix<int> table(0, s);
    std::vector<int> row(s);
    for (const auto& rec : history.records()) {
        if (rec.unit.size() != s || !grid.contains(rec.unit)) continue;
        for (std::size_t d = 0; d < s; ++d) row[d] = grid.snap(d, rec.unit[d]);
        table.append_row(row);
    }
    SnapResult out;
    out.count = table.rows();
    out.fixed = LevelDesign(std::move(table), grid.levels());
    return out;
}

struct SequdConfig {
    std::size_t t_max = 100;
    std::size_t n_per_stage = 0;  ///< 0 selects default_stage_size()
    int q_levels = 0;             ///< 0 selects default_stage_size()
    AugudConfig augud;
    std::uint64_t seed = 0;
    int parallelism = 1;
    Direction direction = Direction::maximize;
    int shooting = 1;      ///< zoom centres per stage; values above 1 are experimental
    int max_stages = 64;   ///< hard stop once the spacing has shrunk this many times

    /// Stage size after filling in the defaults for an s-dimensional space.
    [[nodiscard]] std::pair<std::size_t, int> stage_size(std::size_t s) const {
        auto [n, q] = default_stage_size(s);
        return {n_per_stage ? n_per_stage : n, q_levels ? q_levels : q};
    }

    void validate(std::size_t s) const {
        const auto [n, q] = stage_size(s);
        if (q < 2) throw std::invalid_argument("sequd: q_levels must be >= 2");
        if (n < 1 || n % static_cast<std::size_t>(q) != 0) {
            throw std::invalid_argument("sequd: runs per stage (" + std::to_string(n) +
                                        ") must be a positive multiple of q_levels (" + std::to_string(q) + ")");
        }
        if (t_max < n) {
            throw std::invalid_argument("sequd: budget t_max (" + std::to_string(t_max) +
                                        ") is smaller than one stage (" + std::to_string(n) + ")");
        }
        if (parallelism < 1) throw std::invalid_argument("sequd: parallelism must be >= 1");
        if (shooting < 1) throw std::invalid_argument("sequd: shooting must be >= 1");
        if (max_stages < 1) throw std::invalid_argument("sequd: max_stages must be >= 1");
        augud.validate();
    }
};

namespace detail {

// Up to k best successful points with pairwise distinct coordinates.
inline std::vector<std::vector<double>> zoom_centres(const History& h, int k) {
    std::vector<std::vector<double>> out;
    for (std::size_t idx : h.ranked()) {
        if (static_cast<int>(out.size()) >= k) break;
        const auto& u = h[idx].unit;
        if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(u);
    }
    return out;
}

inline bool grid_exhausted(int j, int q, int max_stages) {
    return j > max_stages || stage_spacing(j, q) < 1e-14;
}

struct StagePlan {
    SubspaceGrid grid;
    SnapResult snapped;
    std::size_t new_runs = 0;  ///< n_j = n - n_e, clamped at zero
};

inline StagePlan plan_stage(const History& h, std::span<const double> centre, int j, std::size_t n, int q) {
    StagePlan p;
    p.grid = zoom_grid(centre, j, q);
    p.snapped = snap_existing(h, p.grid);
    p.new_runs = n > p.snapped.count ? n - p.snapped.count : 0;
    return p;
}

// Break guard: the next n_j runs must fit in what is left of the budget.
inline bool stage_fits(std::size_t used, std::size_t pending, std::size_t n_j, std::size_t t_max) {
    return used + pending + n_j <= t_max;
}

}  // namespace detail

inline History run_sequd(const SearchSpace& space, const Evaluator& objective, const SequdConfig& cfg) {
    const std::size_t s = space.dimension();
    if (s == 0) throw std::invalid_argument("sequd: search space is empty");
    cfg.validate(s);
    const auto [n, q] = cfg.stage_size(s);

    History history(cfg.direction, cfg.seed);
    AugudConfig acfg = cfg.augud;
    acfg.seed = derive_seed(cfg.seed, 1);
    const AugudResult initial = construct_ud(n, s, q, acfg);
    evaluate_batch(history, space, to_unit(initial.design), 1, objective, cfg.parallelism);
    std::size_t used = n;

    for (int j = 2;; ++j) {
        if (detail::grid_exhausted(j, q, cfg.max_stages)) break;
        const auto centres = detail::zoom_centres(history, cfg.shooting);
        if (centres.empty()) break;  // nothing succeeded, nowhere to zoom

        Matrix<double> batch(0, s);
        bool out_of_budget = false;
        for (std::size_t c = 0; c < centres.size(); ++c) {
            const detail::StagePlan plan = detail::plan_stage(history, centres[c], j, n, q);
            if (!detail::stage_fits(used, batch.rows(), plan.new_runs, cfg.t_max)) {
                out_of_budget = true;
                break;
            }
            if (plan.new_runs == 0) continue;
            acfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j) * 1024 + c);
            const AugudResult aug = run_augud(plan.snapped.fixed, plan.new_runs, s, q, acfg, BalancePolicy::relaxed);
            batch = batch.vstack(plan.grid.map(aug.design));
        }
        if (out_of_budget && batch.empty()) break;
        evaluate_batch(history, space, batch, j, objective, cfg.parallelism);
        used += batch.rows();
        if (out_of_budget) break;
    }
    return history;
}

/// SeqRand: the same zooming schedule with n uniform random points per stage
/// inside the zoomed box (clipped to the unit cube).
inline History run_seqrand(const SearchSpace& space, const Evaluator& objective, const SequdConfig& cfg) {
    const std::size_t s = space.dimension();
    if (s == 0) throw std::invalid_argument("seqrand: search space is empty");
    cfg.validate(s);
    const auto [n, q] = cfg.stage_size(s);

    History history(cfg.direction, cfg.seed);
    Rng rng(derive_seed(cfg.seed, 1));
    Matrix<double> batch(n, s);
    for (double& v : batch.data()) v = uniform01(rng);
    evaluate_batch(history, space, batch, 1, objective, cfg.parallelism);
    std::size_t used = n;

    for (int j = 2;; ++j) {
        if (detail::grid_exhausted(j, q, cfg.max_stages)) break;
        const auto centres = detail::zoom_centres(history, cfg.shooting);
        if (centres.empty()) break;
        if (used + n * centres.size() > cfg.t_max) break;
        batch = Matrix<double>(0, s);
        std::vector<double> point(s);
        for (const auto& centre : centres) {
            const SubspaceGrid grid = zoom_grid(centre, j, q);
            for (std::size_t r = 0; r < n; ++r) {
                for (std::size_t d = 0; d < s; ++d) {
                    const double lo = std::max(0.0, grid.lower(d));
                    const double hi = std::min(1.0, grid.upper(d));
                    point[d] = std::clamp(lo + uniform01(rng) * (hi - lo), 0.0, 1.0);
                }
                batch.append_row(point);
            }
        }
        evaluate_batch(history, space, batch, j, objective, cfg.parallelism);
        used += batch.rows();
    }
    return history;
}

}  // namespace sequd
