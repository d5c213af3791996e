#pragma once

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "sudoku/dpll.hpp"

namespace sudoku {

/// Row, column and block occupancy (value -> cell) for the cell-value
/// literals currently true.
class TheoryState {
public:
    explicit TheoryState(int n);

    int size() const { return n_; }

    /// Records a newly true literal, or returns the two-literal conflict
    /// clause {-existing, -new} if its value already occupies a shared unit.
    /// Negative literals are ignored.
    std::optional<Clause> propagate(Literal newly_assigned);
    /// Forgets a literal being unassigned; no-op if it was never recorded.
    void retract(Literal l);

    /// True iff the occupancy maps hold exactly the positive literals of `a`.
    bool mirrors(const Assignment& a) const;

    /// Cell index (row*n + col) holding `value` in the unit, or -1.
    int row_occupant(int row, int value) const { return rows_[slot(row, value)]; }
    int col_occupant(int col, int value) const { return cols_[slot(col, value)]; }
    int block_occupant(int block, int value) const { return blocks_[slot(block, value)]; }

private:
    std::size_t slot(int unit, int value) const {
        return static_cast<std::size_t>(unit) * (n_ + 1) + value;
    }

    int n_;
    int b_;
    std::vector<int> rows_;
    std::vector<int> cols_;
    std::vector<int> blocks_;
};

std::optional<Clause> theory_propagate(TheoryState& state, Literal newly_assigned);

/// Theory conflict clauses added to the formula during search.
class LearnedClauseStore {
public:
    /// Appends c unless an identical clause (as a literal set) is stored.
    /// Returns whether the store grew.
    bool learn(const Clause& c);

    const std::vector<Clause>& clauses() const { return clauses_; }
    std::size_t size() const { return clauses_.size(); }

private:
    std::vector<Clause> clauses_;
    std::set<std::vector<int>> keys_;
};

/// Called with each new learned clause and the assignment at learn time.
using LearnObserver = std::function<void(const Clause&, const Assignment&)>;

struct DplltOptions {
    /// Throw std::logic_error if occupancy drifts from the assignment.
    bool verify_invariants = false;
    LearnObserver on_learn;
};

/// DPLL search with the Sudoku theory attached. Every literal set true is
/// checked against the occupancy maps; a duplicate becomes a learned
/// two-literal conflict clause and the search backtracks. Once Boolean
/// propagation settles, the theory also rules the newly placed values out of
/// their row, column and block peers (counted as propagations).
class DplltSolver {
public:
    explicit DplltSolver(DplltOptions options = {}) : options_(std::move(options)) {}

    /// f must come from encode() (either mode); grid_size selects the theory.
    SolveOutcome solve(const CnfFormula& f, const Deadline& deadline = {});

    const LearnedClauseStore& learned() const { return learned_; }

private:
    DplltOptions options_;
    LearnedClauseStore learned_;
};

/// DPLL(T) with the Sudoku all-different theory. Pair with
/// encode(grid, EncodingMode::TheoryOnly) for the theory-only division of labor.
SolveOutcome solve_t(const CnfFormula& f, const Deadline& deadline = {});

}  // namespace sudoku
