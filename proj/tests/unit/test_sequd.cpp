#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "sequd/benchmarks.hpp"
#include "sequd/experiment.hpp"
#include "sequd/sequd.hpp"

using namespace sequd;

TEST(DefaultStageSize, BoundaryAtFiveDimensions) {
    EXPECT_EQ(default_stage_size(2), (std::pair<std::size_t, int>{15, 15}));
    EXPECT_EQ(default_stage_size(5), (std::pair<std::size_t, int>{15, 15}));
    EXPECT_EQ(default_stage_size(8), (std::pair<std::size_t, int>{25, 25}));
}

TEST(ZoomLevels, OddAndEvenLevelCounts) {
    const auto odd = zoom_levels(0.5, 2, 3);
    ASSERT_EQ(odd.size(), 3u);
    EXPECT_NEAR(odd[0], 1.0 / 3.0, 1e-15);
    EXPECT_EQ(odd[1], 0.5);
    EXPECT_NEAR(odd[2], 2.0 / 3.0, 1e-15);

    const auto even = zoom_levels(0.5, 2, 4);
    EXPECT_EQ(even, (std::vector<double>{0.375, 0.5, 0.625, 0.75}));
    EXPECT_THROW(zoom_levels(0.5, 1, 3), std::invalid_argument);
}

TEST(ZoomLevels, SpacingHalvesPerStage) {
    for (int q : {3, 4, 15}) {
        for (int j = 2; j < 10; ++j) {
            const auto a = zoom_levels(0.3, j, q);
            const auto b = zoom_levels(0.3, j + 1, q);
            EXPECT_NEAR(a[1] - a[0], 2.0 * (b[1] - b[0]), 1e-15);
            EXPECT_NEAR(a[1] - a[0], 1.0 / (std::pow(2.0, j - 1) * q), 1e-15);
            EXPECT_EQ(stage_spacing(j, q), 1.0 / (std::pow(2.0, j - 1) * q));
        }
    }
}

TEST(ShiftIntoBounds, TranslatesWithoutChangingSpacing) {
    auto low = shift_into_bounds({-0.1, 0.0, 0.1}, 0.1);
    EXPECT_NEAR(low[0], 0.0, 1e-15);
    EXPECT_NEAR(low[1], 0.1, 1e-15);
    EXPECT_NEAR(low[2], 0.2, 1e-15);
    auto high = shift_into_bounds({0.9, 1.0, 1.1}, 0.1);
    EXPECT_NEAR(high[0], 0.8, 1e-15);
    EXPECT_NEAR(high[1], 0.9, 1e-15);
    EXPECT_NEAR(high[2], 1.0, 1e-15);
    const std::vector<double> inside{0.2, 0.3, 0.4};
    EXPECT_EQ(shift_into_bounds(inside, 0.1), inside);
    EXPECT_THROW(shift_into_bounds({0.0, 0.6, 1.2}, 0.6), std::invalid_argument);
}

TEST(ZoomGrid, AllLevelsInsideUnitIntervalAndIncumbentInBox) {
    Rng rng(3);
    for (int i = 0; i < 500; ++i) {
        const std::vector<double> c{uniform01(rng), uniform01(rng)};
        for (int q : {4, 15}) {
            const SubspaceGrid g = zoom_grid(c, 2 + i % 6, q);
            for (const auto& axis : g.axes) {
                EXPECT_GE(axis.front(), 0.0);
                EXPECT_LE(axis.back(), 1.0);
            }
            EXPECT_TRUE(g.contains(c));
        }
    }
}

TEST(SnapExisting, SnapsInsideTheBoxOnly) {
    History h(Direction::maximize);
    const SubspaceGrid g = zoom_grid(std::vector<double>{0.5, 0.5}, 2, 3);
    EXPECT_EQ(snap_existing(h, g).count, 0u);

    auto add = [&](std::vector<double> u) {
        TrialRecord r;
        r.unit = std::move(u);
        h.append(std::move(r));
    };
    add({0.5, 0.5});            // centre
    add({1.0 / 3.0, 2.0 / 3.0});  // exactly on levels
    add({0.0, 0.0});            // outside the box
    add({0.27, 0.5});           // inside, nearest the lowest level
    const SnapResult s = snap_existing(h, g);
    ASSERT_EQ(s.count, 3u);
    EXPECT_EQ(s.fixed(0, 0), 2);
    EXPECT_EQ(s.fixed(0, 1), 2);
    EXPECT_EQ(s.fixed(1, 0), 1);
    EXPECT_EQ(s.fixed(1, 1), 3);
    EXPECT_EQ(s.fixed(2, 0), 1);
}

TEST(SubspaceGrid, SnapTiesGoToTheLowerLevel) {
    SubspaceGrid g;
    g.spacing = 0.25;
    g.axes = {{0.25, 0.5, 0.75}};
    EXPECT_EQ(g.snap(0, 0.375), 1);
    EXPECT_EQ(g.snap(0, 0.376), 2);
    EXPECT_EQ(g.snap(0, 0.625), 2);
}

namespace {

Problem cliff_problem() {
    ExperimentConfig cfg;
    cfg.builtin = "cliff";
    return resolve_problem(cfg);
}

}  // namespace

TEST(RunSequd, RespectsBudgetAndFindsCliffTop) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.t_max = 100;
    cfg.direction = p.direction;
    const History h = run_sequd(p.space, p.evaluate, cfg);
    EXPECT_LE(h.size(), 100u);
    EXPECT_GE(h.best_value(), 0.99);
    EXPECT_EQ(h[0].stage, 1);
    for (std::size_t i = 1; i < h.size(); ++i) EXPECT_GE(h[i].stage, h[i - 1].stage);
}

TEST(RunSequd, IncumbentIsMonotone) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.seed = 3;
    cfg.direction = p.direction;
    const auto curve = run_sequd(p.space, p.evaluate, cfg).best_so_far();
    for (std::size_t i = 1; i < curve.size(); ++i) EXPECT_GE(curve[i], curve[i - 1]);
}

TEST(RunSequd, OneStageBudget) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.t_max = 15;
    cfg.direction = p.direction;
    const History h = run_sequd(p.space, p.evaluate, cfg);
    EXPECT_EQ(h.size(), 15u);
    cfg.t_max = 14;
    EXPECT_THROW(run_sequd(p.space, p.evaluate, cfg), std::invalid_argument);
}

TEST(RunSequd, ParallelismDoesNotChangeHistory) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.seed = 9;
    cfg.direction = p.direction;
    const History a = run_sequd(p.space, p.evaluate, cfg);
    cfg.parallelism = 8;
    const History b = run_sequd(p.space, p.evaluate, cfg);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].unit, b[i].unit);
        EXPECT_EQ(a[i].value, b[i].value);
    }
}

TEST(RunSequd, FailuresConsumeBudgetAndNeverBecomeIncumbent) {
    const Problem p = cliff_problem();
    Evaluator flaky = [&](const TrialRequest& r) {
        if (r.trial % 3 == 0) return EvalOutcome::failure("boom");
        if (r.trial % 5 == 0) throw std::runtime_error("thrown");
        return p.evaluate(r);
    };
    SequdConfig cfg;
    cfg.direction = Direction::maximize;
    const History h = run_sequd(p.space, flaky, cfg);
    EXPECT_LE(h.size(), 100u);
    std::size_t failed = 0;
    for (const auto& r : h.records()) {
        if (r.status == TrialStatus::failed) {
            ++failed;
            EXPECT_EQ(r.value, -std::numeric_limits<double>::infinity());
        }
    }
    EXPECT_GT(failed, 0u);
    ASSERT_TRUE(h.incumbent());
    EXPECT_EQ(h[*h.incumbent()].status, TrialStatus::ok);
}

TEST(RunSequd, FullyOccupiedStageAdvancesWithoutEvaluating) {
    // With n = q = 2 in 1-D, the second stage holds the incumbent and its
    // neighbour; when both snap into the zoomed grid n_j = 0 and the loop
    // must still terminate within budget.
    SearchSpace space = SearchSpace::box(std::vector<std::pair<double, double>>{{0.0, 1.0}});
    Evaluator f = [](const TrialRequest& r) { return EvalOutcome::success(-std::abs(r.unit[0] - 0.5)); };
    SequdConfig cfg;
    cfg.t_max = 40;
    cfg.n_per_stage = 2;
    cfg.q_levels = 2;
    cfg.max_stages = 20;
    const History h = run_sequd(space, f, cfg);
    EXPECT_LE(h.size(), 40u);
}

TEST(RunSeqrand, SingleStageIsPlainRandomSearch) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.t_max = 15;
    cfg.direction = p.direction;
    const History h = run_seqrand(p.space, p.evaluate, cfg);
    EXPECT_EQ(h.size(), 15u);
    for (const auto& r : h.records()) EXPECT_EQ(r.stage, 1);
    cfg.t_max = 100;
    const History full = run_seqrand(p.space, p.evaluate, cfg);
    EXPECT_LE(full.size(), 100u);
    for (const auto& r : full.records()) {
        for (double x : r.unit) {
            EXPECT_GE(x, 0.0);
            EXPECT_LE(x, 1.0);
        }
    }
}

TEST(RunSequd, MultipleShootingStaysWithinBudget) {
    const Problem p = cliff_problem();
    SequdConfig cfg;
    cfg.shooting = 3;
    cfg.direction = p.direction;
    const History h = run_sequd(p.space, p.evaluate, cfg);
    EXPECT_LE(h.size(), 100u);
    EXPECT_GE(h.best_value(), 0.9);
}
