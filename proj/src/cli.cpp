#include "sudoku/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sudoku/bench.hpp"
#include "sudoku/generator.hpp"
#include "sudoku/puzzle_io.hpp"
#include "sudoku/rng.hpp"
#include "sudoku/smt.hpp"
#include "sudoku/solvers.hpp"

namespace sudoku::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::uint64_t seed = 0;
    int size = 25;
    std::string out;
    double timeout = 30.0;

    std::string difficulty;
    int count = 1;
    double budget = 0.0;

    std::string solver;
    std::string puzzle;
    std::string config;

    std::string solvers;
    std::string puzzles_dir;
    bool parallel = false;
};

SolverRegistry make_registry(const Flags& f) {
    if (f.config.empty()) return SolverRegistry{};
    return SolverRegistry{smt::load_configs(f.config)};
}

Clock::duration as_duration(double secs) {
    return std::chrono::duration_cast<Clock::duration>(Seconds(secs));
}

int cmd_generate(const Flags& f, std::ostream& out) {
    const auto level = parse_level(f.difficulty);
    if (!level) throw UsageError("unknown difficulty '" + f.difficulty + "'");
    if (f.count < 1) throw UsageError("--count must be at least 1");
    if (block_edge(f.size) == 0 || f.size > kMaxSize) throw UsageError("--size must be a perfect square");
    const fs::path dir = f.out.empty() ? fs::path("puzzles") : fs::path(f.out);
    fs::create_directories(dir);

    nlohmann::ordered_json manifest;
    manifest["size"] = f.size;
    manifest["difficulty"] = to_string(*level);
    manifest["seed"] = f.seed;
    manifest["count"] = f.count;
    auto& entries = manifest["puzzles"] = nlohmann::ordered_json::array();
    for (int i = 0; i < f.count; ++i) {
        const auto seed = derive_seed(f.seed, static_cast<std::uint64_t>(i));
        auto params = default_params(f.size, *level, seed);
        params.probe_timeout = as_duration(f.timeout);
        const Puzzle p = generate(f.size, params,
                                  f.budget > 0 ? Deadline::after(as_duration(f.budget)) : Deadline{});
        const std::string id = std::string("puzzle_") + to_string(*level) + "_" + std::to_string(seed);
        write_puzzle(dir / (id + ".json"), PuzzleFile{p.grid, std::string(to_string(*level)), seed});
        entries.push_back({{"id", id},
                           {"givens", p.grid.givens()},
                           {"min_rowcol_givens", p.grid.min_rowcol_givens()},
                           {"seed", seed},
                           {"terminal_hash", p.terminal_hash},
                           {"givens_target", p.draw.givens_target},
                           {"restarts", p.restarts}});
        out << id << "  givens=" << p.grid.givens() << '\n';
    }
    const auto manifest_path = dir / (std::string("manifest_") + to_string(*level) + ".json");
    std::ofstream mf(manifest_path, std::ios::binary);
    mf << manifest.dump(2) << '\n';
    if (!mf) throw IoError("cannot write " + manifest_path.string());
    out << "wrote " << f.count << " puzzles and " << manifest_path.string() << '\n';
    return kSat;
}

int cmd_solve(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto registry = make_registry(f);
    const auto solver = registry.resolve(f.solver);
    if (!solver) {
        std::ostringstream names;
        for (const auto& n : registry.names()) names << ' ' << n;
        throw UsageError("unknown solver '" + f.solver + "'; valid:" + names.str());
    }
    std::optional<PuzzleFile> loaded;
    try {
        loaded = read_puzzle(f.puzzle);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
    const PuzzleFile& puzzle = *loaded;

    BenchOptions opts;
    opts.timeout = Seconds(f.timeout);
    const auto rec = run_suite({*solver}, {BenchPuzzle{fs::path(f.puzzle).stem().string(),
                                                        puzzle.difficulty.value_or(""), puzzle.grid}},
                               opts)
                         .front();
    out << "status: " << to_string(rec.status) << '\n';
    out << "solve_time_s: " << rec.solve_time << '\n';
    out << "propagations: "
        << (rec.propagations ? std::to_string(*rec.propagations) : std::string("unavailable")) << '\n';
    if (!rec.message.empty()) err << "error: " << rec.message << '\n';

    switch (rec.status) {
        case RecordStatus::Sat:
            out << to_text(*rec.solution);
            return kSat;
        case RecordStatus::Unsat: return kUnsat;
        case RecordStatus::Timeout: return kTimeout;
        default: return kError;
    }
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

int cmd_bench(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto registry = make_registry(f);
    const auto names = f.solvers.empty() ? registry.available() : split_names(f.solvers);
    std::vector<NamedSolver> solvers;
    for (const auto& name : names) {
        auto s = registry.resolve(name);
        if (!s) {
            std::ostringstream valid;
            for (const auto& n : registry.names()) valid << ' ' << n;
            throw UsageError("unknown solver '" + name + "'; valid:" + valid.str());
        }
        solvers.push_back(std::move(*s));
    }
    if (!(f.timeout > 0)) throw UsageError("--timeout must be positive");

    std::vector<fs::path> files;
    if (fs::is_directory(f.puzzles_dir)) {
        for (const auto& e : fs::directory_iterator(f.puzzles_dir)) {
            const auto name = e.path().filename().string();
            if (e.is_regular_file() && e.path().extension() == ".json" && !name.starts_with("manifest")) {
                files.push_back(e.path());
            }
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<BenchPuzzle> puzzles;
    for (const auto& p : files) {
        try {
            auto pf = read_puzzle(p);
            puzzles.push_back({p.stem().string(), pf.difficulty.value_or(""), std::move(pf.grid)});
        } catch (const std::exception& e) {
            err << "skipping " << p.string() << ": " << e.what() << '\n';
        }
    }
    if (puzzles.empty()) {
        err << "error: no puzzle files loaded from '" << f.puzzles_dir << "'\n";
        return kError;
    }

    BenchOptions opts;
    opts.timeout = Seconds(f.timeout);
    opts.parallel_solvers = f.parallel;
    const auto records = run_suite(solvers, puzzles, opts);
    const auto aggregates = aggregate(records);
    const auto paths = export_csv(records, aggregates, f.out.empty() ? fs::path("bench_results") : fs::path(f.out),
                                  f.parallel);
    out << format_summary(aggregates);
    out << "results: " << paths.results.string() << '\n';
    out << "summary: " << paths.summary.string() << '\n';
    return kSat;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sudoku SAT/SMT solving, generation and benchmarking"};
    app.require_subcommand(1);
    Flags f;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--seed", f.seed, "Base RNG seed");
        sub->add_option("--size", f.size, "Grid edge n (a perfect square)");
        sub->add_option("--out", f.out, "Output directory");
        sub->add_option("--timeout", f.timeout,
                        "Per-puzzle timeout in seconds (generate: wall-clock cap per uniqueness probe)");
    };

    auto* gen = app.add_subcommand("generate", "Generate puzzles of one difficulty level");
    common(gen);
    gen->add_option("--difficulty", f.difficulty,
                    "extremely_easy | easy | medium | difficult | evil")->required();
    gen->add_option("--count", f.count, "Number of puzzles");
    gen->add_option("--budget", f.budget, "Wall-clock seconds allowed per puzzle (0: unlimited)");

    auto* sol = app.add_subcommand("solve", "Solve one puzzle file");
    common(sol);
    sol->add_option("--solver", f.solver, "dpll | dpllt | dfs | smt:<name>")->required();
    sol->add_option("--puzzle", f.puzzle, "Puzzle file")->required();
    sol->add_option("--config", f.config, "External solver config file");

    auto* ben = app.add_subcommand("bench", "Benchmark solvers over a puzzle directory");
    common(ben);
    ben->add_option("--solvers", f.solvers, "Comma-separated solver names (default: all available)");
    ben->add_option("--puzzles-dir", f.puzzles_dir, "Directory of puzzle files")->required();
    ben->add_option("--config", f.config, "External solver config file");
    ben->add_flag("--parallel", f.parallel, "Run solvers concurrently (timings untrusted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSat;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        if (gen->parsed()) return cmd_generate(f, out);
        if (sol->parsed()) return cmd_solve(f, out, err);
        return cmd_bench(f, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const TimeoutError&) {
        err << "error: time budget exhausted\n";
        return kTimeout;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace sudoku::cli
