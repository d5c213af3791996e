// End-to-end acceptance run. Prints one PASS/FAIL line per criterion as it
// finishes, then the same lines in criterion order, and exits non-zero if
// any criterion failed.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "../unit/helpers.hpp"
#include "sudoku/bench.hpp"
#include "sudoku/cli.hpp"
#include "sudoku/cnf.hpp"
#include "sudoku/dfs.hpp"
#include "sudoku/dpll.hpp"
#include "sudoku/dpllt.hpp"
#include "sudoku/generator.hpp"
#include "sudoku/puzzle_io.hpp"
#include "sudoku/smt.hpp"
#include "sudoku/solvers.hpp"

using namespace sudoku;
namespace fs = std::filesystem;

namespace {

constexpr auto kPerPuzzleBudget = std::chrono::minutes(15);
constexpr double kSolverTimeout = 30.0;

struct Verdict {
    int id;
    std::string title;
    bool pass;
    std::string detail;
};

class Report {
public:
    void add(int id, std::string title, bool pass, std::string detail) {
        Verdict v{id, std::move(title), pass, std::move(detail)};
        print(v);
        verdicts_.push_back(std::move(v));
    }

    int finish() {
        std::sort(verdicts_.begin(), verdicts_.end(), [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
        std::printf("\n== acceptance summary ==\n");
        bool ok = true;
        for (const auto& v : verdicts_) {
            print(v);
            ok = ok && v.pass;
        }
        return ok ? 0 : 1;
    }

private:
    static void print(const Verdict& v) {
        std::printf("%s  criterion %2d  %s: %s\n", v.pass ? "PASS" : "FAIL", v.id, v.title.c_str(), v.detail.c_str());
        std::fflush(stdout);
    }

    std::vector<Verdict> verdicts_;
};

void info(const std::string& line) {
    std::printf("    %s\n", line.c_str());
    std::fflush(stdout);
}

double since(Clock::time_point t0) { return Seconds(Clock::now() - t0).count(); }

std::string fixed(double x, int digits = 2) {
    std::ostringstream s;
    s.setf(std::ios::fixed);
    s.precision(digits);
    s << x;
    return s.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "sudoku");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

// Learned-clause bookkeeping shared with solver runs that may be abandoned
// on another thread, hence the atomics and shared ownership.
struct LearnAudit {
    std::atomic<std::uint64_t> learned{0};
    std::atomic<std::uint64_t> not_falsified{0};
};

GridOutcome run_audited_dpllt(const Grid& puzzle, const Deadline& deadline, LearnAudit& audit) {
    DplltOptions opts;
    opts.on_learn = [&audit](const Clause& c, const Assignment& a) {
        ++audit.learned;
        const bool falsified =
            std::all_of(c.begin(), c.end(), [&](Literal l) { return a.literal_value(l) == 0; });
        if (!falsified) ++audit.not_falsified;
    };
    DplltSolver solver(opts);
    const auto out = solver.solve(encode(puzzle, EncodingMode::TheoryOnly), deadline);
    GridOutcome g;
    g.status = out.status;
    g.propagations = out.stats.propagations;
    if (out.status == SolveStatus::Sat) g.solution = decode_model(*out.model, puzzle.size());
    return g;
}

struct Context {
    fs::path work;
    bool reuse_suite = false;
    /// Every puzzle generated at n = 9 or 25, for the uniqueness re-check.
    std::vector<std::pair<std::string, Grid>> generated;
    std::map<DifficultyLevel, std::vector<Grid>> compliance_puzzles;
    std::shared_ptr<LearnAudit> audit_large = std::make_shared<LearnAudit>();
    LearnAudit audit_small;
    std::uint64_t small_learned_implied = 0;
    std::uint64_t small_learned_not_implied = 0;
    bool ran_cross_solver = false;
    bool ran_small_dpllt = false;
};

// ---------------------------------------------------------------------------

void difficulty_compliance(Context& ctx, Report& rep) {
    const fs::path dir = ctx.work / "compliance";
    fs::create_directories(dir);
    bool ok = true;
    int made = 0;
    double slowest = 0;
    for (const auto level : kAllLevels) {
        for (int k = 0; k < 2; ++k) {
            const auto seed = derive_seed(1001, static_cast<std::uint64_t>(level) * 2 + k);
            const auto params = default_params(25, level, seed);
            const auto t0 = Clock::now();
            std::string line = std::string(to_string(level)) + " seed " + std::to_string(seed) + ": ";
            try {
                const Puzzle p = generate(25, params, Deadline::after(kPerPuzzleBudget));
                const double t = since(t0);
                slowest = std::max(slowest, t);
                const auto c = classify(p.grid);
                const bool fits = c.level == level && c.bound_satisfied && Seconds(t) <= kPerPuzzleBudget;
                ok = ok && fits;
                ++made;
                line += "givens " + std::to_string(p.grid.givens()) + ", min row/col " +
                        std::to_string(p.grid.min_rowcol_givens()) + ", restarts " + std::to_string(p.restarts) +
                        ", " + fixed(t, 1) + " s" + (fits ? "" : "  NOT COMPLIANT");
                ctx.compliance_puzzles[level].push_back(p.grid);
                ctx.generated.emplace_back("compliance/" + std::to_string(seed), p.grid);
                write_puzzle(dir / ("puzzle_" + std::string(to_string(level)) + "_" + std::to_string(seed) + ".json"),
                             PuzzleFile{p.grid, std::string(to_string(level)), seed});
            } catch (const TimeoutError&) {
                ok = false;
                line += "no compliant puzzle within 15 min";
            } catch (const ExhaustedRetries& e) {
                ok = false;
                line += std::string("gave up: ") + e.what() + " after " + fixed(since(t0), 1) + " s";
            }
            info(line);
        }
    }
    rep.add(1, "difficulty compliance at n=25", ok,
            std::to_string(made) + "/10 puzzles generated within budget and in range; slowest " + fixed(slowest, 1) +
                " s");
}

void cross_solver_agreement(Context& ctx, Report& rep) {
    std::vector<BenchPuzzle> puzzles;
    for (int i = 0; i < 20; ++i) {
        const auto level = kAllLevels[static_cast<std::size_t>(i % 5)];
        const auto seed = derive_seed(3003, static_cast<std::uint64_t>(i));
        const Puzzle p = generate(9, default_params(9, level, seed));
        puzzles.push_back({"n9_" + std::to_string(i), to_string(level), p.grid});
        ctx.generated.emplace_back("cross/n9/" + std::to_string(seed), p.grid);
    }
    int large = 0;
    for (const auto level : {DifficultyLevel::ExtremelyEasy, DifficultyLevel::Easy}) {
        for (const auto& g : ctx.compliance_puzzles[level]) {
            if (large == 5) break;
            puzzles.push_back({"n25_" + std::to_string(large++), to_string(level), g});
        }
    }
    for (std::uint64_t k = 0; large < 5 && k < 20; ++k) {
        const auto seed = derive_seed(3025, k);
        try {
            const Puzzle p = generate(25, default_params(25, DifficultyLevel::Easy, seed),
                                      Deadline::after(kPerPuzzleBudget));
            puzzles.push_back({"n25_" + std::to_string(large++), "easy", p.grid});
            ctx.generated.emplace_back("cross/n25/" + std::to_string(seed), p.grid);
        } catch (const std::exception& e) {
            info(std::string("easy 25x25 generation failed: ") + e.what());
        }
    }

    const SolverRegistry registry;
    std::vector<NamedSolver> solvers;
    std::string names;
    for (const auto& name : registry.available()) {
        if (name == "dpllt") {
            auto audit = ctx.audit_large;
            solvers.push_back({name, [audit](const Grid& g, const Deadline& d) {
                                   return run_audited_dpllt(g, d, *audit);
                               }});
        } else {
            solvers.push_back(*registry.resolve(name));
        }
        names += (names.empty() ? "" : ",") + name;
    }
    BenchOptions opts;
    opts.timeout = Seconds(kSolverTimeout);
    const auto records = run_suite(solvers, puzzles, opts);
    ctx.ran_cross_solver = true;

    const std::size_t np = puzzles.size();
    int agreed = 0;
    double slowest = 0;
    for (std::size_t j = 0; j < np; ++j) {
        std::optional<Grid> reference;
        bool same = true;
        for (std::size_t s = 0; s < solvers.size(); ++s) {
            const auto& r = records[s * np + j];
            slowest = std::max(slowest, r.solve_time);
            const bool good = r.status == RecordStatus::Sat && r.solution &&
                              is_complete_valid_solution(*r.solution) && respects_givens(*r.solution, puzzles[j].grid);
            if (!good) {
                same = false;
                info(puzzles[j].id + " " + r.solver_name + ": " + to_string(r.status) + " after " +
                     fixed(r.solve_time) + " s " + r.message);
                continue;
            }
            if (!reference) reference = r.solution;
            if (*reference != *r.solution) {
                same = false;
                info(puzzles[j].id + " " + r.solver_name + ": different grid");
            }
        }
        agreed += same ? 1 : 0;
    }
    const bool ok = agreed == static_cast<int>(np) && np == 25;
    rep.add(3, "cross-solver agreement", ok,
            std::to_string(agreed) + "/" + std::to_string(np) + " puzzles (20 at n=9, " + std::to_string(large) +
                " at n=25) identical across " + names + "; slowest run " + fixed(slowest) + " s");
}

Grid random_4x4_instance(Rng& rng) {
    const auto& all = testing::all_4x4_solutions();
    const Grid& s = all[static_cast<std::size_t>(rng.uniform(0, static_cast<std::int64_t>(all.size()) - 1))];
    Grid g = testing::random_subset(s, static_cast<int>(rng.uniform(10, 60)), rng);
    if (rng.uniform(0, 2) == 0) {
        const int i = static_cast<int>(rng.uniform(0, 15));
        g.set(i / 4, i % 4, static_cast<int>(rng.uniform(1, 4)));
    }
    return g;
}

// True when every completed 4x4 grid satisfies the clause, i.e. the rules
// alone imply it.
bool implied_by_rules_4x4(const Clause& c) {
    for (const auto& sol : testing::all_4x4_solutions()) {
        const bool sat = std::any_of(c.begin(), c.end(), [&](Literal l) {
            const auto [cell, value] = decode_var(l.var(), 4);
            return (sol.at(cell.row, cell.col) == value) == l.positive();
        });
        if (!sat) return false;
    }
    return true;
}

void dpll_correctness(Context& ctx, Report& rep) {
    Rng rng(4004);
    int cnf_mismatch = 0, cnf_sat = 0, bad_models = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto f = testing::random_cnf(rng);
        const bool expected = testing::brute_sat(f);
        const auto got = solve(f);
        if ((got.status == SolveStatus::Sat) != expected || got.status == SolveStatus::Timeout) ++cnf_mismatch;
        if (got.status == SolveStatus::Sat) {
            ++cnf_sat;
            if (!satisfies_all(f, *got.model)) ++bad_models;
        }
    }

    int grid_mismatch = 0, grid_sat = 0;
    for (int i = 0; i < 500; ++i) {
        const Grid p = random_4x4_instance(rng);
        DplltOptions opts;
        opts.on_learn = [&](const Clause& c, const Assignment& a) {
            ++ctx.audit_small.learned;
            if (!std::all_of(c.begin(), c.end(), [&](Literal l) { return a.literal_value(l) == 0; }))
                ++ctx.audit_small.not_falsified;
        };
        DplltSolver solver(opts);
        const auto t = solver.solve(encode(p, EncodingMode::TheoryOnly));
        const auto d = solve(encode(p));
        if (t.status != d.status || (d.status == SolveStatus::Sat) != (testing::brute_count_4x4(p) > 0))
            ++grid_mismatch;
        if (t.status == SolveStatus::Sat) ++grid_sat;
        for (const auto& c : solver.learned().clauses()) {
            if (implied_by_rules_4x4(c))
                ++ctx.small_learned_implied;
            else
                ++ctx.small_learned_not_implied;
        }
    }
    ctx.ran_small_dpllt = true;
    const bool ok = cnf_mismatch == 0 && bad_models == 0 && grid_mismatch == 0;
    rep.add(4, "dpll vs truth tables, dpllt vs dpll", ok,
            "CNF: " + std::to_string(1000 - cnf_mismatch) + "/1000 agree (" + std::to_string(cnf_sat) + " sat, " +
                std::to_string(bad_models) + " bad models); 4x4: " + std::to_string(500 - grid_mismatch) +
                "/500 agree (" + std::to_string(grid_sat) + " sat)");
}

void clause_counts(Report& rep) {
    Rng rng(5005);
    int checked = 0, wrong = 0;
    std::string sample;
    for (const int n : {4, 9}) {
        const Grid solved = n == 4 ? testing::solved_4x4() : testing::solved_9x9();
        std::vector<Grid> grids{Grid(n), solved};
        for (const int keep : {10, 30, 60, 90}) grids.push_back(testing::random_subset(solved, keep, rng));
        for (const auto& g : grids) {
            const auto f = encode(g);
            const long long nn = n;
            const auto formula = nn * nn + 4 * nn * nn * (nn * (nn - 1) / 2) + g.givens();
            const auto reference = testing::reference_clauses(g);
            const bool good = static_cast<long long>(f.clauses.size()) == formula &&
                              static_cast<long long>(reference.size()) == formula && testing::as_set(f) == reference;
            ++checked;
            if (!good) {
                ++wrong;
                info("n=" + std::to_string(n) + " givens " + std::to_string(g.givens()) + ": encode gave " +
                     std::to_string(f.clauses.size()) + ", formula " + std::to_string(formula));
            }
            if (g.givens() == 0) sample += "n=" + std::to_string(n) + " empty: " + std::to_string(formula) + "; ";
        }
    }
    rep.add(5, "clause-count formula", wrong == 0,
            sample + std::to_string(checked - wrong) + "/" + std::to_string(checked) +
                " grids match the formula and an independent clause enumeration");
}

void uniqueness_speedup(Report& rep) {
    std::vector<std::pair<Grid, CellRef>> probes;
    for (std::uint64_t k = 0; probes.size() < 100; ++k) {
        const auto level = kAllLevels[static_cast<std::size_t>(k % 5)];
        const auto seed = derive_seed(6006, k);
        const auto params = default_params(9, level, seed);
        Rng rng(seed);
        const Grid terminal = generate_terminal_pattern(9, params, rng);
        const auto draw = draw_bounds(bounds_table(9)[static_cast<std::size_t>(level)], 9, rng);
        DigOptions opts;
        opts.on_probe = [&](const Grid& g, CellRef cell) {
            if (probes.size() < 100) probes.emplace_back(g, cell);
        };
        dig_holes(terminal, level, draw, rng, opts);
    }

    int agree = 0;
    std::uint64_t fast_nodes = 0, ref_nodes = 0;
    Seconds fast_time{0}, ref_time{0};
    for (const auto& [g, cell] : probes) {
        std::uint64_t a = 0, b = 0;
        auto t0 = Clock::now();
        const bool fast = check_uniqueness_fast(g, cell, {}, &a);
        fast_time += Clock::now() - t0;
        t0 = Clock::now();
        const bool ref = check_uniqueness_reference(g, cell, {}, &b);
        ref_time += Clock::now() - t0;
        agree += fast == ref ? 1 : 0;
        fast_nodes += a;
        ref_nodes += b;
    }
    const double ratio = fast_nodes ? static_cast<double>(ref_nodes) / static_cast<double>(fast_nodes) : 0.0;
    const double time_ratio = fast_time.count() > 0 ? ref_time.count() / fast_time.count() : 0.0;
    const bool ok = agree == 100 && fast_nodes < ref_nodes && ratio > 2.0;
    rep.add(6, "uniqueness-check speedup", ok,
            std::to_string(agree) + "/100 probes agree; nodes " + std::to_string(fast_nodes) + " fast vs " +
                std::to_string(ref_nodes) + " reference, ratio " + fixed(ratio) + " (wall-clock ratio " +
                fixed(time_ratio) + "; the published figure is about 24 at n=25)");
}

void timeout_enforcement(Report& rep) {
    const Seconds timeout{1.0};
    const NamedSolver sleeper{"sleeper", [timeout](const Grid& g, const Deadline&) {
                                  std::this_thread::sleep_for(2 * timeout);
                                  return GridOutcome{SolveStatus::Sat, g, std::nullopt};
                              }};
    const std::vector<BenchPuzzle> puzzles{{"first", "easy", testing::classic_9x9()},
                                           {"second", "easy", testing::classic_9x9()}};
    BenchOptions opts;
    opts.timeout = timeout;
    const auto t0 = Clock::now();
    const auto records = run_suite({sleeper, NamedSolver{"dfs", run_dfs}}, puzzles, opts);
    const double total = since(t0);
    bool ok = records.size() == 4;
    double worst = 0;
    for (int i = 0; ok && i < 2; ++i) {
        worst = std::max(worst, records[i].solve_time);
        ok = records[i].status == RecordStatus::Timeout && records[i].solve_time <= timeout.count() * 1.1;
    }
    ok = ok && records[2].status == RecordStatus::Sat && records[3].status == RecordStatus::Sat;
    rep.add(8, "timeout enforcement", ok,
            "sleeper at 2x a 1 s timeout recorded as timeout after at most " + fixed(worst, 3) +
                " s (limit 1.100); the suite went on to the next puzzle and solver; whole run " + fixed(total) + " s");
}

std::map<std::string, std::string> directory_bytes(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = slurp(e.path());
    return out;
}

void determinism(Context& ctx, Report& rep) {
    struct Flags {
        std::string size, difficulty, count, seed;
    };
    bool ok = true;
    std::size_t files = 0;
    for (const Flags& f : {Flags{"25", "easy", "2", "9009"}, Flags{"9", "evil", "5", "9010"}}) {
        std::map<std::string, std::string> runs[2];
        for (int k = 0; k < 2; ++k) {
            const auto dir = ctx.work / "determinism" / (f.size + "_" + f.difficulty + "_" + std::to_string(k));
            fs::remove_all(dir);
            const auto r = run_cli({"generate", "--difficulty", f.difficulty, "--count", f.count, "--size", f.size,
                                    "--seed", f.seed, "--out", dir.string(), "--budget", "900"});
            if (r.code != 0) {
                ok = false;
                info("generate exited " + std::to_string(r.code) + ": " + r.err);
                continue;
            }
            runs[k] = directory_bytes(dir);
            if (k == 0) {
                for (const auto& [name, text] : runs[k])
                    if (!name.starts_with("manifest"))
                        ctx.generated.emplace_back("determinism/" + name, parse_puzzle(text).grid);
            }
        }
        ok = ok && !runs[0].empty() && runs[0] == runs[1];
        files += runs[0].size();
    }

    const fs::path golden = SUDOKU_GOLDEN_DIR;
    const Grid fixed_puzzle = testing::grid_of({{1, 2, 0, 4}, {0, 4, 0, 0}, {0, 0, 4, 0}, {4, 0, 0, 1}});
    const bool golden_ok = smt::emit(fixed_puzzle).text == slurp(golden / "fixed_4x4.smt2") &&
                           smt::emit(Grid(4)).text == slurp(golden / "empty_4x4.smt2");
    rep.add(9, "determinism", ok && golden_ok,
            std::string(ok ? "two generate runs gave byte-identical output (" + std::to_string(files) + " files)"
                           : "generate runs differ or failed") +
                "; emit " + (golden_ok ? "matches" : "differs from") + " the golden 4x4 scripts");
}

void learned_clause_validity(Context& ctx, Report& rep) {
    const auto large = ctx.audit_large->learned.load();
    const auto large_bad = ctx.audit_large->not_falsified.load();
    const auto small = ctx.audit_small.learned.load();
    const auto small_bad = ctx.audit_small.not_falsified.load();
    const bool ok = ctx.ran_cross_solver && ctx.ran_small_dpllt && large_bad == 0 && small_bad == 0 &&
                    ctx.small_learned_not_implied == 0 && ctx.small_learned_implied > 0;
    rep.add(10, "learned-clause validity", ok,
            "cross-solver runs: " + std::to_string(large - large_bad) + "/" + std::to_string(large) +
                " falsified at learn time; 4x4 runs: " + std::to_string(small - small_bad) + "/" +
                std::to_string(small) + " falsified, " + std::to_string(ctx.small_learned_implied) + "/" +
                std::to_string(ctx.small_learned_implied + ctx.small_learned_not_implied) +
                " distinct clauses implied by the rules" +
                (ctx.ran_cross_solver && ctx.ran_small_dpllt ? "" : " (a prerequisite run was skipped)"));
}

bool manifest_matches(const fs::path& path, const std::string& seed, int count) {
    if (!fs::exists(path)) return false;
    try {
        const auto m = nlohmann::json::parse(slurp(path));
        if (m.at("size") != 25 || m.at("count") != count || std::to_string(m.at("seed").get<std::uint64_t>()) != seed)
            return false;
        for (const auto& e : m.at("puzzles"))
            if (!fs::exists(path.parent_path() / (e.at("id").get<std::string>() + ".json"))) return false;
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

void success_rate_procedure(Context& ctx, Report& rep) {
    const fs::path suite = ctx.work / "suite";
    if (!ctx.reuse_suite) fs::remove_all(suite);
    fs::create_directories(suite);
    int levels_ok = 0;
    for (const auto level : kAllLevels) {
        const std::string name = to_string(level);
        const std::string seed = std::to_string(7007 + static_cast<int>(level));
        const auto t0 = Clock::now();
        if (ctx.reuse_suite && manifest_matches(suite / ("manifest_" + name + ".json"), seed, 20)) {
            info(name + ": reusing the existing suite files");
            ++levels_ok;
            continue;
        }
        const auto r = run_cli({"generate", "--difficulty", name, "--count", "20", "--size", "25", "--seed", seed,
                                "--out", suite.string(), "--budget", "900"});
        info(name + ": generate exited " + std::to_string(r.code) + " after " + fixed(since(t0), 0) + " s" +
             (r.code == 0 ? "" : " (" + r.err.substr(0, r.err.find('\n')) + ")"));
        if (r.code == 0) ++levels_ok;
    }

    int puzzles = 0;
    for (const auto& e : fs::directory_iterator(suite)) {
        const auto file = e.path().filename().string();
        if (file.starts_with("puzzle_")) {
            ++puzzles;
            ctx.generated.emplace_back("suite/" + file, read_puzzle(e.path()).grid);
        }
    }
    if (puzzles == 0) {
        rep.add(7, "success-rate procedure", false, "no puzzles could be generated");
        return;
    }

    const auto solvers = SolverRegistry{}.available();
    const auto t0 = Clock::now();
    const auto r = run_cli({"bench", "--puzzles-dir", suite.string(), "--out", (ctx.work / "bench").string(),
                            "--timeout", fixed(kSolverTimeout, 0)});
    std::istringstream lines(r.out);
    std::string line;
    fs::path results, summary;
    while (std::getline(lines, line)) {
        info(line);
        if (line.starts_with("results: ")) results = line.substr(9);
        if (line.starts_with("summary: ")) summary = line.substr(9);
    }
    bool ok = r.code == 0 && levels_ok == 5 && puzzles == 100;
    std::size_t rows = 0;
    int summary_rows = 0;
    if (r.code == 0) {
        const auto records = read_results_csv(results);
        rows = records.size();
        std::ifstream in(summary);
        while (std::getline(in, line)) {
            if (line.empty() || line.starts_with("#") || line.starts_with("solver,")) continue;
            std::vector<std::string> cols;
            std::stringstream s(line);
            for (std::string c; std::getline(s, c, ',');) cols.push_back(c);
            if (cols.size() >= 4 && !cols[3].empty()) ++summary_rows;
        }
    }
    const auto expected_rows = static_cast<std::size_t>(puzzles) * solvers.size();
    ok = ok && rows == expected_rows && rows == 400 && summary_rows == static_cast<int>(solvers.size());
    rep.add(7, "success-rate procedure", ok,
            std::to_string(puzzles) + "/100 puzzles generated (" + std::to_string(levels_ok) + "/5 levels complete); " +
                std::to_string(rows) + " result rows for " + std::to_string(solvers.size()) + " solvers, " +
                std::to_string(summary_rows) + " summary rows; bench took " + fixed(since(t0), 0) + " s");
}

// A second, independent check at n=9: DPLL finds a completion, then must
// prove that no different completion exists.
bool dpll_confirms_unique(const Grid& g) {
    auto f = encode(g);
    const auto first = solve(f);
    if (first.status != SolveStatus::Sat) return false;
    const Grid s = decode_model(*first.model, g.size());
    Clause block;
    for (int r = 0; r < g.size(); ++r)
        for (int c = 0; c < g.size(); ++c)
            if (g.at(r, c) == 0) block.push_back(Literal(-var_index({r, c}, s.at(r, c), g.size())));
    if (block.empty()) return true;
    f.clauses.push_back(block);
    return solve(f).status == SolveStatus::Unsat;
}

void uniqueness(Context& ctx, Report& rep) {
    int small = 0, large = 0, bad = 0;
    for (const auto& [origin, g] : ctx.generated) {
        bool unique = false;
        try {
            unique = count_solutions(g, 2, Deadline::after(kPerPuzzleBudget)) == 1;
            if (unique && g.size() == 9) unique = dpll_confirms_unique(g);
        } catch (const TimeoutError&) {
            info(origin + ": re-check timed out");
        }
        (g.size() == 9 ? small : large) += 1;
        if (!unique) {
            ++bad;
            info(origin + ": not unique");
        }
    }
    const int total = small + large;
    rep.add(2, "uniqueness re-verification", bad == 0 && small > 0 && large > 0,
            std::to_string(total - bad) + "/" + std::to_string(total) + " generated puzzles unique (" +
                std::to_string(small) + " at n=9 also confirmed by DPLL, " + std::to_string(large) + " at n=25)");
}

}  // namespace

int main(int argc, char** argv) {
    std::setvbuf(stdout, nullptr, _IOLBF, 0);
    CLI::App app{"Sudoku acceptance run"};
    std::string work = "acceptance_work";
    std::vector<int> only;
    bool reuse = false;
    app.add_option("--work-dir", work, "Scratch directory for generated files");
    app.add_option("--only", only, "Run just these criteria (default: all)")->delimiter(',');
    app.add_flag("--reuse-suite", reuse, "Keep an existing 100-puzzle suite instead of regenerating it");
    CLI11_PARSE(app, argc, argv);

    Context ctx;
    ctx.work = fs::absolute(work);
    ctx.reuse_suite = reuse;
    fs::create_directories(ctx.work);
    Report rep;
    auto want = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
    auto step = [&](int id, auto&& fn) {
        if (!want(id)) return;
        const auto t0 = Clock::now();
        std::printf("-- criterion %d\n", id);
        try {
            fn();
        } catch (const std::exception& e) {
            rep.add(id, "criterion " + std::to_string(id), false, std::string("aborted: ") + e.what());
        }
        info("elapsed " + fixed(since(t0), 1) + " s");
    };

    step(5, [&] { clause_counts(rep); });
    step(4, [&] { dpll_correctness(ctx, rep); });
    step(6, [&] { uniqueness_speedup(rep); });
    step(8, [&] { timeout_enforcement(rep); });
    step(9, [&] { determinism(ctx, rep); });
    step(1, [&] { difficulty_compliance(ctx, rep); });
    step(3, [&] { cross_solver_agreement(ctx, rep); });
    step(10, [&] { learned_clause_validity(ctx, rep); });
    step(7, [&] { success_rate_procedure(ctx, rep); });
    step(2, [&] { uniqueness(ctx, rep); });
    return rep.finish();
}
