#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sudoku/deadline.hpp"
#include "sudoku/dpll.hpp"
#include "sudoku/grid.hpp"

namespace sudoku::smt {

class SolverNotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Child exited without a sat/unsat verdict.
class SolverCrashed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// How the model comes back from the solver.
enum class ModelDialect {
    /// `(get-value (...))` answered by `((x_0_0 1) (x_0_1 2) ...)`.
    ValuePairs,
    /// `(get-model)` answered by `(define-fun x_0_0 () Int 1)` entries.
    DefineFun,
};

std::optional<ModelDialect> parse_dialect(std::string_view tag);
const char* to_string(ModelDialect d);

struct SmtScript {
    std::string text;
    int size = 0;
    /// Row-major cell symbols `x_<row>_<col>`.
    std::vector<std::string> var_names;

    const std::string& name(CellRef c) const { return var_names[c.row * size + c.col]; }
};

/// QF_LIA script: one Int per cell, range bounds, `distinct` per row,
/// column and block, one equality per given, check-sat, model retrieval.
SmtScript emit(const Grid& puzzle, ModelDialect dialect = ModelDialect::ValuePairs);

/// Reads cell bindings (optionally preceded by the verdict line).
/// Throws ParseError on missing symbols or malformed text and RangeError for
/// values outside [1, n].
Grid parse_model(std::string_view solver_output, const std::vector<std::string>& var_names, int n,
                 ModelDialect dialect = ModelDialect::ValuePairs);

struct ExternalSolverConfig {
    std::string name;
    std::string executable;
    std::vector<std::string> args;
    ModelDialect dialect = ModelDialect::ValuePairs;
    Clock::duration timeout = std::chrono::seconds(30);
};

/// Default entries for `z3` and `cvc5`; nullopt for other names.
std::optional<ExternalSolverConfig> default_config(std::string_view name);

/// Applies `SUDOKU_SMT_<NAME>` (upper-cased name) as an executable override.
ExternalSolverConfig with_env_override(ExternalSolverConfig cfg);

/// Reads `{"solvers": {"<name>": {"executable", "args", "dialect", "timeout_s"}}}`.
std::map<std::string, ExternalSolverConfig> load_configs(const std::filesystem::path& path);

/// True if the executable resolves on PATH (or is an existing file).
bool executable_available(const std::string& executable);

struct ExternalOutcome {
    SolveStatus status = SolveStatus::Timeout;
    std::optional<Grid> solution;
    Seconds elapsed{0};
    std::string output;
};

/// Runs the script in a child process, feeding it on standard input. A
/// watchdog thread kills the child's process group once cfg.timeout or
/// `deadline` passes, independent of the thread blocked on its output.
ExternalOutcome run_external(const ExternalSolverConfig& cfg, const SmtScript& script,
                             const Deadline& deadline = {});

}  // namespace sudoku::smt
