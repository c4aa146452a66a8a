// sequd-opt: command-line front end for design construction, benchmark
// evaluation and optimization experiments.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 objective protocol
// error (the objective could not be run, or a repetition had no successful
// trial). SEQUD_LOG=trace|debug|info|warn|error|off sets log verbosity.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "sequd/augud.hpp"
#include "sequd/benchmarks.hpp"
#include "sequd/design.hpp"
#include "sequd/detail/format.hpp"
#include "sequd/discrepancy.hpp"
#include "sequd/experiment.hpp"

namespace fs = std::filesystem;
using namespace sequd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitObjective = 3;

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("sequd");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("SEQUD_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to "off"; only honour real level names.
        if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
        else spdlog::warn("SEQUD_LOG='{}' is not a log level; using warn", env);
    }
}

bool has_extension(const std::string& path, const char* ext) { return fs::path(path).extension() == ext; }

LevelDesign load_level_design(const std::string& path, int q) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    if (has_extension(path, ".json")) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(path + ": JSON syntax error at byte " + std::to_string(e.byte));
        }
        try {
            return level_design_from_json(j);
        } catch (const std::exception& e) {
            throw ConfigError(path + ": " + e.what());
        }
    }
    try {
        return read_csv(in, q);
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

UnitDesign load_unit_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    UnitDesign x;
    std::string line;
    for (std::size_t ln = 1; std::getline(in, line); ++ln) {
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(ln) + ": '" + cell + "' is not a number");
            }
        }
        try {
            x.append_row(row);
        } catch (const std::exception& e) {
            throw ConfigError(path + ":" + std::to_string(ln) + ": " + e.what());
        }
    }
    return x;
}

void emit_design(const LevelDesign& d, const std::string& format, const std::string& out_path, double cd2_root,
                 double cd2_sq) {
    std::ostringstream body;
    if (format == "json") body << to_json(d).dump() << '\n';
    else write_csv(body, d);
    const std::string summary = "cd2=" + detail::format_double(cd2_root) + " cd2_squared=" + detail::format_double(cd2_sq);
    if (out_path.empty()) {
        std::cout << body.str();
        std::cerr << summary << '\n';
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ConfigError(out_path + ": cannot write");
        out << body.str();
        std::cout << summary << '\n';
    }
}

int report_experiment(const ExperimentResult& res) {
    const auto& s = res.summary;
    std::cout << "method=" << s["method"].get<std::string>() << " objective=" << s["objective"].get<std::string>()
              << " repetitions=" << res.runs.size() << " total_trials=" << s["total_trials"].get<std::size_t>();
    if (!s["mean_best"].is_null()) {
        std::cout << " mean_best=" << detail::format_double(s["mean_best"].get<double>())
                  << " std_best=" << detail::format_double(s["std_best"].get<double>());
    }
    std::cout << '\n';
    if (const std::size_t bad = res.failed_repetitions(); bad > 0) {
        spdlog::error("{} repetition(s) produced no successful trial", bad);
        for (const auto& run : res.runs) {
            if (!run.history.empty() && !run.history.incumbent()) {
                spdlog::error("first failure: {}", run.history[0].error);
                break;
            }
        }
        return kExitObjective;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    CLI::App app{"Uniform-design construction and sequential uniform-design optimization"};
    app.name("sequd-opt");
    app.require_subcommand(1);
    int exit_code = kExitOk;

    // optimize -------------------------------------------------------------
    auto* optimize = app.add_subcommand("optimize", "Run an optimization experiment from a JSON config");
    std::string config_path;
    std::optional<std::string> o_method;
    std::optional<std::size_t> o_budget;
    std::optional<std::uint64_t> o_seed;
    std::optional<int> o_reps, o_par, o_workers;
    std::optional<std::string> o_out;
    optimize->add_option("--config", config_path, "Experiment config (JSON)")->required();
    optimize->add_option("--method", o_method, "sequd|seqrand|random|lhs|sobol|grid|ud");
    optimize->add_option("--budget", o_budget, "Total trial budget per repetition");
    optimize->add_option("--seed", o_seed, "Base seed; repetition r uses seed+r");
    optimize->add_option("--reps", o_reps, "Number of repetitions");
    optimize->add_option("--parallelism", o_par, "Concurrent evaluations per batch");
    optimize->add_option("--workers", o_workers, "Concurrent repetitions");
    optimize->add_option("--out", o_out, "Output directory for traces and summary.json");
    optimize->callback([&] {
        ExperimentConfig cfg = load_experiment_config(config_path);
        if (o_method) cfg.method = parse_method(*o_method);
        if (o_budget) cfg.budget = *o_budget;
        if (o_seed) cfg.seed = *o_seed;
        if (o_reps) cfg.repetitions = *o_reps;
        if (o_par) cfg.parallelism = *o_par;
        if (o_workers) cfg.workers = *o_workers;
        if (o_out) cfg.output_dir = *o_out;
        spdlog::info("running {} x{} (budget {}, seed {})", to_string(cfg.method), cfg.repetitions, cfg.budget,
                     cfg.seed);
        const ExperimentResult res = run_experiment(cfg);
        if (!cfg.output_dir.empty()) spdlog::info("wrote {}", (fs::path(cfg.output_dir) / "summary.json").string());
        exit_code = report_experiment(res);
    });

    // design ---------------------------------------------------------------
    auto* design = app.add_subcommand("design", "Construct, augment or evaluate designs");
    design->require_subcommand(1);

    auto* generate = design->add_subcommand("generate", "Construct a uniform design U_n(q^s)");
    std::size_t g_runs = 0, g_factors = 0;
    int g_levels = 0;
    AugudConfig g_cfg;
    std::string g_format = "csv", g_out;
    generate->add_option("--runs", g_runs, "Run count n")->required();
    generate->add_option("--factors", g_factors, "Factor count s")->required();
    generate->add_option("--levels", g_levels, "Level count q (must divide n)")->required();
    generate->add_option("--seed", g_cfg.seed, "Seed");
    generate->add_option("--restarts", g_cfg.restarts, "Independent restarts");
    generate->add_option("--outer", g_cfg.m_outer, "Outer iterations");
    generate->add_option("--inner", g_cfg.m_inner, "Inner iterations");
    generate->add_option("--format", g_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    generate->add_option("--out", g_out, "Write the design here instead of stdout");
    generate->callback([&] {
        try {
            check_shape(g_runs, g_factors, g_levels);
            g_cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const AugudResult res = construct_ud(g_runs, g_factors, g_levels, g_cfg);
        emit_design(res.design, g_format, g_out, res.combined_cd2, res.combined_cd2 * res.combined_cd2);
    });

    auto* augment = design->add_subcommand("augment", "Add runs to an existing design");
    std::string a_fixed, a_format = "csv", a_out;
    std::size_t a_add = 0;
    int a_levels = 0;
    bool a_relaxed = false, a_combined = false;
    AugudConfig a_cfg;
    augment->add_option("--fixed", a_fixed, "Existing design (CSV of levels, or .json)")->required();
    augment->add_option("--add", a_add, "Number of runs to add")->required();
    augment->add_option("--levels", a_levels, "Level count q (default: from the file)");
    augment->add_option("--seed", a_cfg.seed, "Seed");
    augment->add_option("--restarts", a_cfg.restarts, "Independent restarts");
    augment->add_flag("--relaxed", a_relaxed, "Allow an unbalanced combined design");
    augment->add_flag("--combined", a_combined, "Emit fixed and added runs together");
    augment->add_option("--format", a_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    augment->add_option("--out", a_out, "Write the design here instead of stdout");
    augment->callback([&] {
        const LevelDesign fixed = load_level_design(a_fixed, a_levels);
        if (a_add < 1) throw ConfigError("--add must be >= 1");
        AugudResult res;
        try {
            a_cfg.validate();
            res = run_augud(fixed, a_add, fixed.factors(), fixed.levels(), a_cfg,
                            a_relaxed ? BalancePolicy::relaxed : BalancePolicy::strict);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const LevelDesign out = a_combined ? fixed.vstack(res.design) : res.design;
        emit_design(out, a_format, a_out, res.combined_cd2, res.combined_cd2 * res.combined_cd2);
    });

    auto* evaluate = design->add_subcommand("evaluate", "Print the centered L2 discrepancy of a design");
    std::string e_design;
    int e_levels = 0;
    bool e_unit = false;
    evaluate->add_option("--design", e_design, "Design file (CSV of levels, or .json)")->required();
    evaluate->add_option("--levels", e_levels, "Level count q (default: from the file)");
    evaluate->add_flag("--unit", e_unit, "The CSV holds points in [0,1] rather than levels");
    evaluate->callback([&] {
        UnitDesign x = e_unit ? load_unit_design(e_design) : to_unit(load_level_design(e_design, e_levels));
        double sq = 0.0;
        try {
            sq = cd2_squared(x);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e_design + ": " + e.what());
        }
        std::cout << "runs=" << x.rows() << " factors=" << x.cols() << " cd2=" << detail::format_double(std::sqrt(sq))
                  << " cd2_squared=" << detail::format_double(sq) << '\n';
    });

    // bench ----------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Synthetic benchmark functions");
    bench->require_subcommand(1);
    auto* blist = bench->add_subcommand("list", "List registered functions");
    blist->callback([] {
        std::cout << "name\tdim\tdirection\tdomain\toptimum\n";
        for (const auto& f : benchmark_registry()) {
            std::cout << f.name << '\t' << f.dimension << '\t' << to_string(f.direction) << '\t';
            for (std::size_t d = 0; d < f.domain.size(); ++d) {
                std::cout << (d ? " x " : "") << '[' << detail::format_double(f.domain[d].first) << ','
                          << detail::format_double(f.domain[d].second) << ']';
            }
            std::cout << '\t';
            if (f.known_optimum) {
                std::cout << detail::format_double17(f.known_optimum->value) << " at";
                for (const auto& loc : f.known_optimum->locations) {
                    std::cout << " (";
                    for (std::size_t d = 0; d < loc.size(); ++d) std::cout << (d ? "," : "") << detail::format_double(loc[d]);
                    std::cout << ')';
                }
            } else {
                std::cout << '-';
            }
            std::cout << '\n';
        }
    });
    auto* beval = bench->add_subcommand("eval", "Evaluate a function at one point");
    std::string b_name, b_point;
    beval->add_option("--name", b_name, "Function name")->required();
    beval->add_option("--point", b_point, "Comma-separated coordinates")->required();
    beval->callback([&] {
        const BenchmarkFunction* f = nullptr;
        try {
            f = &lookup_benchmark(b_name);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        std::vector<double> x;
        std::stringstream ss(b_point);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                x.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument("junk");
            } catch (const std::exception&) {
                throw ConfigError("--point: '" + cell + "' is not a number");
            }
        }
        try {
            std::cout << detail::format_double17(f->evaluate(x)) << '\n';
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    });

    // compare --------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "Rank methods over paired repetitions");
    std::vector<std::string> c_configs;
    std::string c_out;
    std::optional<int> c_reps;
    std::optional<std::uint64_t> c_seed;
    compare->add_option("--configs", c_configs, "Experiment configs sharing objective and budget")->required();
    compare->add_option("--reps", c_reps, "Override repetitions in every config");
    compare->add_option("--seed", c_seed, "Override the base seed in every config");
    compare->add_option("--out", c_out, "Directory for ranks.csv and pairs.csv (default: print ranks)");
    compare->callback([&] {
        std::vector<ExperimentConfig> cfgs;
        for (const auto& p : c_configs) {
            ExperimentConfig c = load_experiment_config(p);
            if (c_reps) c.repetitions = *c_reps;
            if (c_seed) c.seed = *c_seed;
            c.output_dir.clear();
            cfgs.push_back(std::move(c));
        }
        const ComparisonTable table = compare_methods(cfgs);
        if (c_out.empty()) {
            write_rank_csv(std::cout, table);
        } else {
            std::error_code ec;
            fs::create_directories(c_out, ec);
            std::ofstream ranks(fs::path(c_out) / "ranks.csv", std::ios::binary);
            std::ofstream pairs(fs::path(c_out) / "pairs.csv", std::ios::binary);
            if (!ranks || !pairs) throw ConfigError("--out: cannot write into '" + c_out + "'");
            write_rank_csv(ranks, table);
            write_pairs_csv(pairs, table);
            write_rank_csv(std::cout, table);
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    } catch (const ConfigError& e) {
        spdlog::error("{}", e.what());
        return kExitConfig;
    } catch (const ObjectiveError& e) {
        spdlog::error("objective: {}", e.what());
        return kExitObjective;
    } catch (const std::invalid_argument& e) {
        spdlog::error("{}", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return exit_code;
}
