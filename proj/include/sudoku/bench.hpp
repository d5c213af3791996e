#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sudoku/deadline.hpp"
#include "sudoku/dpll.hpp"
#include "sudoku/grid.hpp"

namespace sudoku {

/// What any solver hands back to the harness.
struct GridOutcome {
    SolveStatus status = SolveStatus::Timeout;
    std::optional<Grid> solution;
    /// Absent for solvers that do not expose propagation counts.
    std::optional<std::uint64_t> propagations;
};

using SolverFn = std::function<GridOutcome(const Grid&, const Deadline&)>;

struct NamedSolver {
    std::string name;
    SolverFn run;
};

struct BenchPuzzle {
    std::string id;
    std::string difficulty;
    Grid grid;
};

enum class RecordStatus { Sat, Unsat, Timeout, Error, InvalidSolution };

const char* to_string(RecordStatus s);
std::optional<RecordStatus> parse_record_status(std::string_view s);

struct BenchRecord {
    std::string solver_name;
    std::string puzzle_id;
    std::string difficulty;
    RecordStatus status = RecordStatus::Error;
    double solve_time = 0.0;  // seconds, wall clock
    std::optional<std::uint64_t> propagations;
    std::optional<double> propagation_rate;
    std::string message;  // error detail, not exported
    std::optional<Grid> solution;  // kept for sat records, not exported
};

struct BenchOptions {
    Seconds timeout{30.0};
    /// An in-process run still going at timeout * (1 + watchdog_grace) is
    /// abandoned and recorded as a timeout.
    double watchdog_grace = 0.05;
    /// Run different solvers concurrently; timings are then not comparable.
    bool parallel_solvers = false;
};

/// One record per (solver, puzzle). Each solver walks the puzzles in order;
/// a failing run becomes a record, never an exception.
std::vector<BenchRecord> run_suite(const std::vector<NamedSolver>& solvers,
                                   const std::vector<BenchPuzzle>& puzzles,
                                   const BenchOptions& options = {});

struct BenchAggregate {
    std::string solver;
    int total = 0;
    int solved = 0;
    double success_rate = 0.0;
    /// Over solved runs only.
    std::optional<double> avg_solve_time;
    /// Over solved runs that report a propagation count.
    std::optional<double> avg_propagations;
};

class EmptyInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-solver statistics, ordered by solver name.
std::vector<BenchAggregate> aggregate(const std::vector<BenchRecord>& records);

struct ExportPaths {
    std::filesystem::path results;
    std::filesystem::path summary;
};

/// Writes results_<ts>.csv and summary_<ts>.csv with ts = YYYYMMDDThhmmssZ
/// (UTC). A numeric suffix keeps filenames distinct within one second.
ExportPaths export_csv(const std::vector<BenchRecord>& records,
                       const std::vector<BenchAggregate>& aggregates,
                       const std::filesystem::path& out_dir, bool timings_untrusted = false);

std::vector<BenchRecord> read_results_csv(const std::filesystem::path& path);

/// Fixed-width text table of the aggregates.
std::string format_summary(const std::vector<BenchAggregate>& aggregates);

}  // namespace sudoku
