#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sudoku/bench.hpp"
#include "sudoku/smt.hpp"

namespace sudoku {

GridOutcome run_dpll(const Grid& puzzle, const Deadline& deadline);
/// DPLL(T) over the theory-only encoding.
GridOutcome run_dpllt(const Grid& puzzle, const Deadline& deadline);
GridOutcome run_dfs(const Grid& puzzle, const Deadline& deadline);
SolverFn external_solver(smt::ExternalSolverConfig cfg);

/// Name -> solver lookup: `dpll`, `dpllt`, `dfs`, and `smt:<name>` for each
/// external solver configuration.
class SolverRegistry {
public:
    /// Built-in z3/cvc5 entries, then the optional config file on top.
    explicit SolverRegistry(std::map<std::string, smt::ExternalSolverConfig> external = {});

    std::optional<NamedSolver> resolve(const std::string& name) const;
    /// Every name resolve() accepts.
    std::vector<std::string> names() const;
    /// In-process solvers plus external ones whose executable is present.
    std::vector<std::string> available() const;

private:
    std::map<std::string, smt::ExternalSolverConfig> external_;
};

}  // namespace sudoku
