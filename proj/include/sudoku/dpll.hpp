#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sudoku/cnf.hpp"
#include "sudoku/deadline.hpp"

namespace sudoku {

enum class SolveStatus { Sat, Unsat, Timeout };

const char* to_string(SolveStatus s);

struct SolverStats {
    /// Literals assigned by unit propagation or pure-literal elimination,
    /// plus theory conflict detections under DPLL(T).
    std::uint64_t propagations = 0;
    std::uint64_t decisions = 0;
    std::uint64_t backtracks = 0;
    Seconds elapsed{0};
};

/// model is present iff status == Sat.
struct SolveOutcome {
    SolveStatus status = SolveStatus::Unsat;
    std::optional<Model> model;
    SolverStats stats;
};

struct TrailEntry {
    int var = 0;
    bool value = false;
    bool decision = false;
    /// Set on a decision whose opposite branch is already being explored.
    bool flipped = false;
};

/// Partial assignment with a chronological trail.
class Assignment {
public:
    explicit Assignment(int var_count) : values_(var_count + 1, kUnassigned) {}

    int var_count() const { return static_cast<int>(values_.size()) - 1; }

    bool assigned(int var) const { return values_[var] != kUnassigned; }
    std::optional<bool> value(int var) const {
        if (values_[var] == kUnassigned) return std::nullopt;
        return values_[var] == 1;
    }
    /// 1 true, 0 false, -1 unassigned.
    int literal_value(Literal l) const {
        const auto v = values_[l.var()];
        if (v == kUnassigned) return -1;
        return (v == 1) == l.positive() ? 1 : 0;
    }

    void push(Literal l, bool decision, bool flipped = false);
    TrailEntry pop();

    const std::vector<TrailEntry>& trail() const { return trail_; }
    std::size_t size() const { return trail_.size(); }

private:
    static constexpr std::int8_t kUnassigned = -1;
    std::vector<std::int8_t> values_;
    std::vector<TrailEntry> trail_;
};

struct PropagationResult {
    bool conflict = false;
    /// The falsified clause when conflict is set.
    Clause clause;
};

/// Assigns forced literals until fixpoint or a clause becomes false.
PropagationResult unit_propagate(const CnfFormula& f, Assignment& a, SolverStats& stats);

/// One pass assigning every variable that occurs with a single polarity among
/// the clauses not yet satisfied by `a`. Returns the literals assigned.
std::vector<Literal> pure_literal_eliminate(const CnfFormula& f, Assignment& a,
                                            SolverStats& stats);

/// Classical DPLL: unit propagation, one pure-literal pass per decision
/// level, lowest-index-first branching with true tried first, chronological
/// backtracking.
SolveOutcome solve(const CnfFormula& f, const Deadline& deadline = {});

}  // namespace sudoku
