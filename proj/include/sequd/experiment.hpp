#pragma once

// Experiment orchestration: JSON configuration, seeded repetitions, trace and
// summary files, and paired method comparison.
//
// Configuration document (every key optional except "objective"):
//   {"label": "sequd-cliff", "method": "sequd", "objective": "cliff",
//    "budget": 100, "repetitions": 20, "seed": 0, "parallelism": 1, "workers": 1,
//    "output": "runs/cliff", "direction": "maximize",
//    "sequd": {"runs_per_stage": 15, "levels": 15, "shooting": 1, "max_stages": 64},
//    "augud": {"gamma": 0.005, "eta": 0.1, "alpha": 0.8, "m_outer": 50, "m_inner": 100,
//              "m_exchange": 10, "restarts": 1}}
// An external objective replaces the builtin name with
//   {"command": ["python3", "bowl.py"], "timeout": 30, "failure_policy": "record"}
// and then requires a "space" array (see param_space.hpp).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sequd/augud.hpp"
#include "sequd/benchmarks.hpp"
#include "sequd/detail/format.hpp"
#include "sequd/direction.hpp"
#include "sequd/external.hpp"
#include "sequd/history.hpp"
#include "sequd/param_space.hpp"
#include "sequd/samplers.hpp"
#include "sequd/sequd.hpp"

namespace sequd {

/// Invalid configuration or method/space combination.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Method { sequd, seqrand, random, lhs, sobol, grid, ud };

inline Method parse_method(const std::string& s) {
    static const std::pair<const char*, Method> table[] = {
        {"sequd", Method::sequd}, {"seqrand", Method::seqrand}, {"random", Method::random}, {"lhs", Method::lhs},
        {"sobol", Method::sobol}, {"grid", Method::grid},       {"ud", Method::ud}};
    for (const auto& [name, m] : table) {
        if (s == name) return m;
    }
    throw ConfigError("unknown method \"" + s + "\" (expected sequd, seqrand, random, lhs, sobol, grid or ud)");
}

inline const char* to_string(Method m) {
    switch (m) {
        case Method::sequd: return "sequd";
        case Method::seqrand: return "seqrand";
        case Method::random: return "random";
        case Method::lhs: return "lhs";
        case Method::sobol: return "sobol";
        case Method::grid: return "grid";
        case Method::ud: return "ud";
    }
    return "?";
}

struct ExperimentConfig {
    std::string label;  ///< column name in comparison tables; defaults to the method
    Method method = Method::sequd;
    std::string builtin;  ///< benchmark name, or empty for an external objective
    std::optional<ExternalObjectiveSpec> external;
    std::optional<SearchSpace> space;
    std::optional<Direction> direction;
    std::size_t budget = 100;
    int repetitions = 1;
    std::uint64_t seed = 0;
    int parallelism = 1;  ///< concurrent evaluations inside one batch
    int workers = 1;      ///< concurrent repetitions
    std::string output_dir;
    std::size_t runs_per_stage = 0;  ///< 0 = default stage size
    int levels = 0;
    int shooting = 1;
    int max_stages = 64;
    AugudConfig augud;

    [[nodiscard]] std::string name() const { return label.empty() ? to_string(method) : label; }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::string& where,
                                std::initializer_list<const char*> known) {
    for (const auto& [key, _] : obj.items()) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown field");
        }
    }
}

template <typename T>
T get_number(const nlohmann::json& obj, const char* key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    const std::string path = where.empty() ? key : where + "." + key;
    if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(path + ": expected an integer");
        if (v.is_number_unsigned()) return static_cast<T>(v.get<std::uint64_t>());
        const auto x = v.get<std::int64_t>();
        if (x < 0) throw ConfigError(path + ": must be non-negative");
        return static_cast<T>(x);
    } else {
        if (!v.is_number()) throw ConfigError(path + ": expected a number");
        return v.get<T>();
    }
}

inline std::string get_string(const nlohmann::json& obj, const char* key, const std::string& where,
                              std::string fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_string()) throw ConfigError((where.empty() ? "" : where + ".") + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

}  // namespace detail

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    using namespace detail;
    if (!j.is_object()) throw ConfigError("config: expected a JSON object");
    reject_unknown_keys(j, "", {"label", "method", "objective", "space", "direction", "budget", "repetitions", "seed",
                                "parallelism", "workers", "output", "sequd", "augud"});
    ExperimentConfig cfg;
    cfg.label = get_string(j, "label", "", "");
    cfg.method = parse_method(get_string(j, "method", "", "sequd"));

    if (!j.contains("objective")) throw ConfigError("objective: missing field");
    const auto& obj = j.at("objective");
    if (obj.is_string()) {
        cfg.builtin = obj.get<std::string>();
    } else if (obj.is_object()) {
        reject_unknown_keys(obj, "objective", {"builtin", "command", "timeout", "failure_policy"});
        if (obj.contains("builtin") == obj.contains("command")) {
            throw ConfigError("objective: give exactly one of \"builtin\" or \"command\"");
        }
        if (obj.contains("builtin")) {
            cfg.builtin = get_string(obj, "builtin", "objective", "");
        } else {
            ExternalObjectiveSpec ext;
            const auto& cmd = obj.at("command");
            if (!cmd.is_array() || cmd.empty()) throw ConfigError("objective.command: expected a non-empty array");
            for (std::size_t i = 0; i < cmd.size(); ++i) {
                if (!cmd[i].is_string()) {
                    throw ConfigError("objective.command[" + std::to_string(i) + "]: expected a string");
                }
                ext.argv.push_back(cmd[i].get<std::string>());
            }
            ext.timeout_seconds = get_number<double>(obj, "timeout", "objective", 60.0);
            if (!(ext.timeout_seconds > 0.0)) throw ConfigError("objective.timeout: must be positive");
            const std::string policy = get_string(obj, "failure_policy", "objective", "record");
            if (policy == "record") ext.failure_policy = FailurePolicy::record;
            else if (policy == "abort") ext.failure_policy = FailurePolicy::abort;
            else throw ConfigError("objective.failure_policy: expected \"record\" or \"abort\"");
            cfg.external = std::move(ext);
        }
    } else {
        throw ConfigError("objective: expected a builtin name or an object");
    }

    if (j.contains("space")) {
        try {
            cfg.space = search_space_from_json(j.at("space"));
        } catch (const SpaceError& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("direction")) {
        try {
            cfg.direction = parse_direction(get_string(j, "direction", "", ""));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("direction: ") + e.what());
        }
    }
    cfg.budget = get_number<std::size_t>(j, "budget", "", cfg.budget);
    cfg.repetitions = get_number<int>(j, "repetitions", "", cfg.repetitions);
    cfg.seed = get_number<std::uint64_t>(j, "seed", "", cfg.seed);
    cfg.parallelism = get_number<int>(j, "parallelism", "", cfg.parallelism);
    cfg.workers = get_number<int>(j, "workers", "", cfg.workers);
    cfg.output_dir = get_string(j, "output", "", "");

    if (j.contains("sequd")) {
        const auto& s = j.at("sequd");
        if (!s.is_object()) throw ConfigError("sequd: expected an object");
        reject_unknown_keys(s, "sequd", {"runs_per_stage", "levels", "shooting", "max_stages"});
        cfg.runs_per_stage = get_number<std::size_t>(s, "runs_per_stage", "sequd", 0);
        cfg.levels = get_number<int>(s, "levels", "sequd", 0);
        cfg.shooting = get_number<int>(s, "shooting", "sequd", 1);
        cfg.max_stages = get_number<int>(s, "max_stages", "sequd", 64);
    }
    if (j.contains("augud")) {
        const auto& a = j.at("augud");
        if (!a.is_object()) throw ConfigError("augud: expected an object");
        reject_unknown_keys(a, "augud", {"gamma", "eta", "alpha", "m_outer", "m_inner", "m_exchange", "restarts"});
        cfg.augud.gamma = get_number<double>(a, "gamma", "augud", cfg.augud.gamma);
        cfg.augud.eta = get_number<double>(a, "eta", "augud", cfg.augud.eta);
        cfg.augud.alpha = get_number<double>(a, "alpha", "augud", cfg.augud.alpha);
        cfg.augud.m_outer = get_number<int>(a, "m_outer", "augud", cfg.augud.m_outer);
        cfg.augud.m_inner = get_number<int>(a, "m_inner", "augud", cfg.augud.m_inner);
        cfg.augud.restarts = get_number<int>(a, "restarts", "augud", cfg.augud.restarts);
        if (a.contains("m_exchange")) cfg.augud.m_exchange = get_number<int>(a, "m_exchange", "augud", 1);
    }
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": JSON syntax error at byte " + std::to_string(e.byte));
    }
    try {
        return experiment_config_from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

/// The objective as the optimizers see it.
struct Problem {
    std::string objective;
    SearchSpace space;
    Evaluator evaluate;
    Direction direction = Direction::minimize;
};

inline Evaluator benchmark_evaluator(const BenchmarkFunction& f) {
    return [&f](const TrialRequest& req) {
        std::vector<double> x(req.config->values.size());
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = req.config->number(i);
        return EvalOutcome::success(f.evaluate(x));
    };
}

inline Problem resolve_problem(const ExperimentConfig& cfg) {
    Problem p;
    if (cfg.external) {
        if (!cfg.space) throw ConfigError("space: an external objective needs a search space");
        p.objective = cfg.external->argv.front();
        p.space = *cfg.space;
        p.evaluate = external_evaluator(*cfg.external);
        p.direction = cfg.direction.value_or(Direction::minimize);
        return p;
    }
    if (cfg.space) throw ConfigError("space: builtin objectives use their own domain");
    const BenchmarkFunction* f = nullptr;
    try {
        f = &lookup_benchmark(cfg.builtin);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("objective: ") + e.what());
    }
    p.objective = f->name;
    p.space = SearchSpace::box(f->domain);
    p.evaluate = benchmark_evaluator(*f);
    p.direction = cfg.direction.value_or(f->direction);
    return p;
}

inline SequdConfig sequd_config(const ExperimentConfig& cfg, const Problem& p, std::uint64_t seed) {
    SequdConfig sc;
    sc.t_max = cfg.budget;
    sc.n_per_stage = cfg.runs_per_stage;
    sc.q_levels = cfg.levels;
    sc.augud = cfg.augud;
    sc.seed = seed;
    sc.parallelism = cfg.parallelism;
    sc.direction = p.direction;
    sc.shooting = cfg.shooting;
    sc.max_stages = cfg.max_stages;
    return sc;
}

/// Method/space compatibility checks; throws ConfigError.
inline void validate_experiment(const ExperimentConfig& cfg, const Problem& p) {
    if (cfg.budget < 1) throw ConfigError("budget: must be >= 1");
    if (cfg.repetitions < 1) throw ConfigError("repetitions: must be >= 1");
    if (cfg.parallelism < 1) throw ConfigError("parallelism: must be >= 1");
    if (cfg.workers < 1) throw ConfigError("workers: must be >= 1");
    const std::size_t s = p.space.dimension();
    try {
        cfg.augud.validate();
        switch (cfg.method) {
            case Method::grid:
                if (s != 2) throw ConfigError("method grid: only defined for 2-dimensional spaces, got " + std::to_string(s));
                break;
            case Method::sequd:
            case Method::seqrand: sequd_config(cfg, p, cfg.seed).validate(s); break;
            default: break;
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

/// One repetition with the given seed.
inline History run_method(const ExperimentConfig& cfg, const Problem& p, std::uint64_t seed) {
    const std::size_t s = p.space.dimension();
    switch (cfg.method) {
        case Method::sequd: return run_sequd(p.space, p.evaluate, sequd_config(cfg, p, seed));
        case Method::seqrand: return run_seqrand(p.space, p.evaluate, sequd_config(cfg, p, seed));
        default: break;
    }
    Matrix<double> points;
    switch (cfg.method) {
        case Method::random: points = sample_random(cfg.budget, s, seed); break;
        case Method::lhs: points = sample_lhs(cfg.budget, s, seed); break;
        case Method::sobol: points = sample_sobol(cfg.budget, s); break;
        case Method::grid: points = sample_grid(cfg.budget, s); break;
        case Method::ud: {
            AugudConfig a = cfg.augud;
            a.seed = seed;
            points = to_unit(construct_ud(cfg.budget, s, static_cast<int>(cfg.budget), a).design);
            break;
        }
        default: break;
    }
    History h(p.direction, seed);
    evaluate_batch(h, p.space, points, 1, p.evaluate, cfg.parallelism);
    return h;
}

// ---------------------------------------------------------------------------
// Trace files

inline void write_trace(std::ostream& out, const History& h, const SearchSpace& space) {
    const std::size_t s = space.dimension();
    out << "trial,stage,y,status";
    for (std::size_t d = 1; d <= s; ++d) out << ",x_" << d;
    for (const auto& p : space.params()) out << ',' << detail::csv_escape(p.name);
    out << '\n';
    for (const auto& r : h.records()) {
        out << r.trial << ',' << r.stage << ',' << detail::format_double(r.value) << ',' << to_string(r.status);
        for (double x : r.unit) out << ',' << detail::format_double(x);
        for (const auto& [name, value] : r.config.values) {
            out << ',';
            if (const auto* d = std::get_if<double>(&value)) out << detail::format_double(*d);
            else if (const auto* n = std::get_if<std::int64_t>(&value)) out << *n;
            else out << detail::csv_escape(std::get<std::string>(value));
        }
        out << '\n';
    }
}

struct TraceRow {
    std::size_t trial = 0;
    int stage = 1;
    double y = 0.0;
    TrialStatus status = TrialStatus::ok;
    std::vector<double> unit;
};

/// Reads the trial/stage/y/status/x_* columns back; parameter columns are skipped.
inline std::vector<TraceRow> read_trace(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            const char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') cell += line[++i];
                else if (c == '"') quoted = false;
                else cell += c;
            } else if (c == '"') {
                quoted = true;
            } else if (c == ',') {
                cells.push_back(std::move(cell));
                cell.clear();
            } else {
                cell += c;
            }
        }
        cells.push_back(std::move(cell));
        return cells;
    };
    auto number = [](const std::string& text, std::size_t line) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
        if (ec != std::errc{} || ptr != text.data() + text.size()) {
            throw std::runtime_error("trace line " + std::to_string(line) + ": bad number '" + text + "'");
        }
        return v;
    };

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trace: empty file");
    const auto header = split(line);
    if (header.size() < 4 || header[0] != "trial" || header[1] != "stage" || header[2] != "y" || header[3] != "status") {
        throw std::runtime_error("trace: unexpected header");
    }
    std::size_t s = 0;
    while (4 + s < header.size() && header[4 + s] == "x_" + std::to_string(s + 1)) ++s;

    std::vector<TraceRow> rows;
    for (std::size_t ln = 2; std::getline(in, line); ++ln) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw std::runtime_error("trace line " + std::to_string(ln) + ": expected " +
                                     std::to_string(header.size()) + " fields");
        }
        TraceRow row;
        row.trial = static_cast<std::size_t>(number(cells[0], ln));
        row.stage = static_cast<int>(number(cells[1], ln));
        row.y = number(cells[2], ln);
        row.status = cells[3] == "ok" ? TrialStatus::ok : TrialStatus::failed;
        for (std::size_t d = 0; d < s; ++d) row.unit.push_back(number(cells[4 + d], ln));
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Incumbent value recomputed from trace rows; earliest wins ties.
inline std::optional<double> trace_best(const std::vector<TraceRow>& rows, Direction dir) {
    std::optional<double> best;
    for (const auto& r : rows) {
        if (r.status != TrialStatus::ok) continue;
        if (!best || to_score(r.y, dir) > to_score(*best, dir)) best = r.y;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Experiments

struct RepetitionResult {
    std::uint64_t seed = 0;
    History history;
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    Problem problem;
    std::vector<RepetitionResult> runs;
    nlohmann::json summary;

    [[nodiscard]] std::vector<double> final_bests() const {
        std::vector<double> out;
        for (const auto& r : runs) out.push_back(r.history.best_value());
        return out;
    }
    /// Repetitions in which no trial succeeded.
    [[nodiscard]] std::size_t failed_repetitions() const {
        return static_cast<std::size_t>(
            std::count_if(runs.begin(), runs.end(), [](const auto& r) { return !r.history.incumbent(); }));
    }
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& v) {
    if (v.empty()) return {0.0, 0.0};
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json summarize(const ExperimentConfig& cfg, const Problem& p, const std::vector<RepetitionResult>& runs,
                                double wall) {
    nlohmann::json reps = nlohmann::json::array();
    std::vector<double> bests;
    std::size_t total = 0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const History& h = runs[r].history;
        nlohmann::json e;
        e["repetition"] = r;
        e["seed"] = runs[r].seed;
        e["trace"] = "trace_rep" + std::to_string(r) + ".csv";
        e["total_trials"] = h.size();
        e["failed_trials"] = std::count_if(h.records().begin(), h.records().end(),
                                           [](const TrialRecord& t) { return t.status == TrialStatus::failed; });
        e["wall_time_s"] = runs[r].wall_seconds;
        if (const auto inc = h.incumbent()) {
            e["best"] = h[*inc].value;
            e["incumbent_trial"] = *inc;
            e["incumbent"] = h[*inc].config.to_json();
            e["incumbent_unit"] = h[*inc].unit;
            bests.push_back(h[*inc].value);
        } else {
            e["best"] = nullptr;
            e["incumbent"] = nullptr;
        }
        nlohmann::json curve = nlohmann::json::array();
        const auto bsf = h.best_so_far();
        for (std::size_t k = 10; k <= bsf.size(); k += 10) curve.push_back({{"trials", k}, {"best", finite_or_null(bsf[k - 1])}});
        e["best_so_far"] = std::move(curve);
        total += h.size();
        reps.push_back(std::move(e));
    }
    const auto [mean, sd] = mean_std(bests);
    nlohmann::json out;
    out["label"] = cfg.name();
    out["method"] = to_string(cfg.method);
    out["objective"] = p.objective;
    out["direction"] = to_string(p.direction);
    out["budget"] = cfg.budget;
    out["repetitions"] = cfg.repetitions;
    out["seed"] = cfg.seed;
    out["parallelism"] = cfg.parallelism;
    out["total_trials"] = total;
    out["wall_time_s"] = wall;
    out["mean_best"] = bests.empty() ? nlohmann::json(nullptr) : nlohmann::json(mean);
    out["std_best"] = bests.empty() ? nlohmann::json(nullptr) : nlohmann::json(sd);
    out["runs"] = std::move(reps);
    return out;
}

}  // namespace detail

/// Runs every repetition (seed = base + r), then writes trace_rep{r}.csv and
/// summary.json under cfg.output_dir when it is set.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    ExperimentResult result;
    result.config = cfg;
    result.problem = resolve_problem(cfg);
    validate_experiment(cfg, result.problem);
    const Problem& p = result.problem;

    std::filesystem::path dir;
    if (!cfg.output_dir.empty()) {
        dir = cfg.output_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir)) {
            throw ConfigError("output: cannot create directory '" + dir.string() + "'");
        }
    }

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto reps = static_cast<std::size_t>(cfg.repetitions);
    result.runs.resize(reps);
    std::vector<std::exception_ptr> errors(reps);
    auto run_rep = [&](std::size_t r) {
        try {
            const auto t0 = clock::now();
            const std::uint64_t seed = cfg.seed + r;
            result.runs[r].seed = seed;
            result.runs[r].history = run_method(cfg, p, seed);
            result.runs[r].wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();
        } catch (...) {
            errors[r] = std::current_exception();
        }
    };
    const std::size_t workers = std::min<std::size_t>(reps, static_cast<std::size_t>(cfg.workers));
    if (workers <= 1) {
        for (std::size_t r = 0; r < reps; ++r) run_rep(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) run_rep(r);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    const double wall = std::chrono::duration<double>(clock::now() - start).count();
    result.summary = detail::summarize(cfg, p, result.runs, wall);

    if (!dir.empty()) {
        for (std::size_t r = 0; r < reps; ++r) {
            const auto path = dir / ("trace_rep" + std::to_string(r) + ".csv");
            std::ofstream out(path, std::ios::binary);
            if (!out) throw ConfigError("output: cannot write '" + path.string() + "'");
            write_trace(out, result.runs[r].history, p.space);
        }
        std::ofstream out(dir / "summary.json", std::ios::binary);
        if (!out) throw ConfigError("output: cannot write summary.json");
        out << result.summary.dump(2) << '\n';
    }
    return result;
}

// ---------------------------------------------------------------------------
// Comparison

struct ComparisonTable {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> seeds;
    std::vector<std::vector<double>> best;  ///< [method][repetition]
    std::vector<double> mean_best;
    std::vector<double> std_best;
    std::vector<double> mean_rank;
};

/// Average ranks (1 = best) of `scores` (larger is better); ties share the mean rank.
inline std::vector<double> average_ranks(const std::vector<double>& scores) {
    const std::size_t m = scores.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<double> ranks(m);
    for (std::size_t i = 0; i < m;) {
        std::size_t k = i;
        while (k + 1 < m && scores[order[k + 1]] == scores[order[i]]) ++k;
        const double r = (static_cast<double>(i + 1) + static_cast<double>(k + 1)) / 2.0;
        for (std::size_t t = i; t <= k; ++t) ranks[order[t]] = r;
        i = k + 1;
    }
    return ranks;
}

inline ComparisonTable compare_results(const std::vector<ExperimentResult>& results) {
    if (results.size() < 2) throw ConfigError("compare: need at least two configurations");
    const auto& first = results.front();
    for (const auto& r : results) {
        if (r.config.budget != first.config.budget) {
            throw ConfigError("compare: budgets differ (" + std::to_string(first.config.budget) + " vs " +
                              std::to_string(r.config.budget) + ")");
        }
        if (r.config.repetitions != first.config.repetitions || r.config.seed != first.config.seed) {
            throw ConfigError("compare: configurations must share repetitions and seed to be paired");
        }
        if (r.problem.objective != first.problem.objective || r.problem.direction != first.problem.direction) {
            throw ConfigError("compare: configurations must share the objective and direction");
        }
    }
    ComparisonTable t;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < results.size(); ++i) {
        std::string label = results[i].config.name();
        if (!seen.insert(label).second) label += "#" + std::to_string(i);
        seen.insert(label);
        t.labels.push_back(label);
        t.best.push_back(results[i].final_bests());
    }
    for (const auto& run : first.runs) t.seeds.push_back(run.seed);

    const Direction dir = first.problem.direction;
    const std::size_t m = results.size();
    const std::size_t reps = t.seeds.size();
    t.mean_rank.assign(m, 0.0);
    for (std::size_t r = 0; r < reps; ++r) {
        std::vector<double> scores(m);
        for (std::size_t i = 0; i < m; ++i) scores[i] = to_score(t.best[i][r], dir);
        const auto ranks = average_ranks(scores);
        for (std::size_t i = 0; i < m; ++i) t.mean_rank[i] += ranks[i];
    }
    for (double& r : t.mean_rank) r /= static_cast<double>(reps);
    for (std::size_t i = 0; i < m; ++i) {
        const auto [mean, sd] = detail::mean_std(t.best[i]);
        t.mean_best.push_back(mean);
        t.std_best.push_back(sd);
    }
    return t;
}

inline ComparisonTable compare_methods(const std::vector<ExperimentConfig>& cfgs) {
    if (cfgs.size() < 2) throw ConfigError("compare: need at least two configurations");
    for (const auto& c : cfgs) {
        if (c.budget != cfgs.front().budget) throw ConfigError("compare: budgets differ");
    }
    std::vector<ExperimentResult> results;
    for (const auto& c : cfgs) results.push_back(run_experiment(c));
    return compare_results(results);
}

inline void write_rank_csv(std::ostream& out, const ComparisonTable& t) {
    out << "method,mean_best,std_best,mean_rank\n";
    for (std::size_t i = 0; i < t.labels.size(); ++i) {
        out << detail::csv_escape(t.labels[i]) << ',' << detail::format_double(t.mean_best[i]) << ','
            << detail::format_double(t.std_best[i]) << ',' << detail::format_double(t.mean_rank[i]) << '\n';
    }
}

/// Per-seed final bests, one column per method, for external significance testing.
inline void write_pairs_csv(std::ostream& out, const ComparisonTable& t) {
    out << "repetition,seed";
    for (const auto& l : t.labels) out << ',' << detail::csv_escape(l);
    out << '\n';
    for (std::size_t r = 0; r < t.seeds.size(); ++r) {
        out << r << ',' << t.seeds[r];
        for (const auto& col : t.best) out << ',' << detail::format_double(col[r]);
        out << '\n';
    }
}

}  // namespace sequd
