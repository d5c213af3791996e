#include "sudoku/solvers.hpp"

#include "sudoku/cnf.hpp"
#include "sudoku/dfs.hpp"
#include "sudoku/dpll.hpp"
#include "sudoku/dpllt.hpp"

namespace sudoku {

namespace {

GridOutcome from_sat(const SolveOutcome& o, int n) {
    GridOutcome g;
    g.status = o.status;
    g.propagations = o.stats.propagations;
    if (o.status == SolveStatus::Sat) g.solution = decode_model(*o.model, n);
    return g;
}

}  // namespace

GridOutcome run_dpll(const Grid& puzzle, const Deadline& deadline) {
    return from_sat(solve(encode(puzzle), deadline), puzzle.size());
}

GridOutcome run_dpllt(const Grid& puzzle, const Deadline& deadline) {
    DplltSolver solver;
    return from_sat(solver.solve(encode(puzzle, EncodingMode::TheoryOnly), deadline), puzzle.size());
}

GridOutcome run_dfs(const Grid& puzzle, const Deadline& deadline) {
    const auto r = solve_dfs(puzzle, deadline);
    // Node expansions are not clause propagations, so none are reported.
    GridOutcome g;
    switch (r.status) {
        case DfsStatus::Solved:
            g.status = SolveStatus::Sat;
            g.solution = r.solution;
            break;
        case DfsStatus::NoSolution: g.status = SolveStatus::Unsat; break;
        case DfsStatus::Timeout: g.status = SolveStatus::Timeout; break;
    }
    return g;
}

SolverFn external_solver(smt::ExternalSolverConfig cfg) {
    return [cfg = std::move(cfg)](const Grid& puzzle, const Deadline& deadline) {
        const auto script = smt::emit(puzzle, cfg.dialect);
        auto r = smt::run_external(cfg, script, deadline);
        GridOutcome g;
        g.status = r.status;
        g.solution = std::move(r.solution);
        return g;
    };
}

SolverRegistry::SolverRegistry(std::map<std::string, smt::ExternalSolverConfig> external) {
    for (const char* name : {"z3", "cvc5"}) external_[name] = *smt::default_config(name);
    for (auto& [name, cfg] : external) external_[name] = std::move(cfg);
    for (auto& [name, cfg] : external_) cfg = smt::with_env_override(std::move(cfg));
}

std::optional<NamedSolver> SolverRegistry::resolve(const std::string& name) const {
    if (name == "dpll") return NamedSolver{name, run_dpll};
    if (name == "dpllt") return NamedSolver{name, run_dpllt};
    if (name == "dfs") return NamedSolver{name, run_dfs};
    if (name.starts_with("smt:")) {
        const auto it = external_.find(name.substr(4));
        if (it != external_.end()) return NamedSolver{name, external_solver(it->second)};
    }
    return std::nullopt;
}

std::vector<std::string> SolverRegistry::names() const {
    std::vector<std::string> out{"dpll", "dpllt", "dfs"};
    for (const auto& [name, cfg] : external_) out.push_back("smt:" + name);
    return out;
}

std::vector<std::string> SolverRegistry::available() const {
    std::vector<std::string> out{"dpll", "dpllt", "dfs"};
    for (const auto& [name, cfg] : external_) {
        if (smt::executable_available(cfg.executable)) out.push_back("smt:" + name);
    }
    return out;
}

}  // namespace sudoku
