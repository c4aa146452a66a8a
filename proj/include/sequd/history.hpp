#pragma once

// Trial records and stage-synchronous batch evaluation shared by every
// optimizer and sampler.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <mutex>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sequd/direction.hpp"
#include "sequd/matrix.hpp"
#include "sequd/param_space.hpp"

namespace sequd {

/// Raised by an evaluator to stop the whole run instead of recording a failed
/// trial. evaluate_batch finishes the batch, then rethrows the first one.
class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TrialStatus { ok, failed };

inline const char* to_string(TrialStatus s) { return s == TrialStatus::ok ? "ok" : "failed"; }

struct TrialRequest {
    std::size_t trial = 0;  ///< 0-based position in the history
    int stage = 1;
    std::span<const double> unit;
    const TrialConfig* config = nullptr;
};

struct EvalOutcome {
    bool ok = false;
    double value = 0.0;
    std::string error;

    static EvalOutcome success(double v) { return {true, v, {}}; }
    static EvalOutcome failure(std::string why) { return {false, 0.0, std::move(why)}; }
};

/// Must be safe to call concurrently when parallelism > 1.
using Evaluator = std::function<EvalOutcome(const TrialRequest&)>;

struct TrialRecord {
    std::size_t trial = 0;
    int stage = 1;
    std::vector<double> unit;
    TrialConfig config;
    double value = 0.0;  ///< raw objective value; the direction's worst value when failed
    TrialStatus status = TrialStatus::ok;
    std::string error;
};

class History {
public:
    History() = default;
    explicit History(Direction direction, std::uint64_t seed = 0) : direction_(direction), seed_(seed) {}

    [[nodiscard]] Direction direction() const noexcept { return direction_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] std::size_t size() const noexcept { return records_.size(); }
    [[nodiscard]] bool empty() const noexcept { return records_.empty(); }
    [[nodiscard]] const std::vector<TrialRecord>& records() const noexcept { return records_; }
    [[nodiscard]] const TrialRecord& operator[](std::size_t i) const { return records_.at(i); }

    void append(TrialRecord r) {
        r.trial = records_.size();
        if (r.status == TrialStatus::ok) {
            if (!incumbent_ || to_score(r.value, direction_) > to_score(records_[*incumbent_].value, direction_)) {
                incumbent_ = records_.size();
            }
        }
        records_.push_back(std::move(r));
    }

    /// Best successful trial; earliest wins ties.
    [[nodiscard]] std::optional<std::size_t> incumbent() const noexcept { return incumbent_; }

    [[nodiscard]] double best_value() const {
        return incumbent_ ? records_[*incumbent_].value : worst_value(direction_);
    }

    /// Incumbent value after each trial.
    [[nodiscard]] std::vector<double> best_so_far() const {
        std::vector<double> out;
        out.reserve(records_.size());
        double best = worst_value(direction_);
        for (const auto& r : records_) {
            if (r.status == TrialStatus::ok && to_score(r.value, direction_) > to_score(best, direction_)) best = r.value;
            out.push_back(best);
        }
        return out;
    }

    /// Successful trials ordered by score (best first, earliest first on ties).
    [[nodiscard]] std::vector<std::size_t> ranked() const {
        std::vector<std::size_t> idx;
        for (const auto& r : records_) {
            if (r.status == TrialStatus::ok) idx.push_back(r.trial);
        }
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
            return to_score(records_[a].value, direction_) > to_score(records_[b].value, direction_);
        });
        return idx;
    }

private:
    Direction direction_ = Direction::maximize;
    std::uint64_t seed_ = 0;
    std::vector<TrialRecord> records_;
    std::optional<std::size_t> incumbent_;
};

/// Decodes and evaluates every row of `points`, then appends the records in
/// row order. Up to `parallelism` evaluations run at once; results are written
/// by index so the history never depends on completion order.
inline void evaluate_batch(History& history, const SearchSpace& space, const Matrix<double>& points, int stage,
                           const Evaluator& evaluate, int parallelism) {
    const std::size_t n = points.rows();
    if (n == 0) return;
    const std::size_t base = history.size();
    std::vector<TrialRecord> batch(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto row = points.row(i);
        batch[i].trial = base + i;
        batch[i].stage = stage;
        batch[i].unit.assign(row.begin(), row.end());
        batch[i].config = space.decode(row);
    }

    const Direction dir = history.direction();
    std::mutex abort_mutex;
    std::exception_ptr abort;
    auto run_one = [&](std::size_t i) {
        TrialRecord& rec = batch[i];
        EvalOutcome out;
        try {
            out = evaluate(TrialRequest{rec.trial, stage, rec.unit, &rec.config});
        } catch (const ObjectiveError& e) {
            const std::lock_guard lock(abort_mutex);
            if (!abort) abort = std::current_exception();
            out = EvalOutcome::failure(e.what());
        } catch (const std::exception& e) {
            out = EvalOutcome::failure(e.what());
        } catch (...) {
            out = EvalOutcome::failure("unknown exception");
        }
        if (out.ok && !std::isfinite(out.value)) out = EvalOutcome::failure("non-finite objective value");
        rec.status = out.ok ? TrialStatus::ok : TrialStatus::failed;
        rec.value = out.ok ? out.value : worst_value(dir);
        rec.error = std::move(out.error);
    };

    const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, parallelism)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) run_one(i);
            });
        }
    }
    if (abort) std::rethrow_exception(abort);
    for (auto& r : batch) history.append(std::move(r));
}

}  // namespace sequd
