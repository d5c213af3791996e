#pragma once

// Search engine shared by the DPLL and DPLL(T) solvers.
//
// Clause state is tracked with counters rather than watched literals: each
// clause keeps its number of true and false literals, and each variable keeps
// how many unresolved clauses mention it in either polarity. Assigning or
// undoing a literal touches only the clauses that contain its variable, which
// keeps unit detection and pure-literal detection incremental.

#include <cstdint>
#include <optional>
#include <vector>

#include "sudoku/dpll.hpp"

namespace sudoku::detail {

class TheoryHook {
public:
    virtual ~TheoryHook() = default;
    /// Called after a positive literal becomes true. Returns a conflict
    /// clause when the theory rejects it.
    virtual std::optional<Clause> on_true(Literal l) = 0;
    virtual void on_undo(Literal l) = 0;
    /// Records a theory conflict clause while its literals are still
    /// assigned; false if it was already known.
    virtual bool learn(const Clause& c, const Assignment& at) = 0;
    /// Appends literals the theory implies under the current assignment.
    /// Asked once Boolean propagation reaches a fixpoint.
    virtual void implied(const Assignment&, std::vector<Literal>&) {}
    /// Called whenever the search reaches a conflict-free state.
    virtual void checkpoint(const Assignment&) {}
};

struct EngineOptions {
    /// When false, pure-literal elimination only assigns variables false.
    bool positive_pure = true;
};

class DpllEngine {
public:
    enum class Step { Ok, Conflict, Timeout };

    DpllEngine(const CnfFormula& f, EngineOptions options = {}, TheoryHook* theory = nullptr);

    /// Replays an existing partial assignment without propagating.
    void load(const Assignment& a);

    Step propagate(const Deadline& deadline);
    std::vector<Literal> eliminate_pure();
    /// Undoes to the most recent unflipped decision and flips it.
    /// Returns false when no such decision exists.
    bool backtrack();
    void decide(Literal l);
    std::optional<int> pick_branch_var() const;

    SolveOutcome run(const Deadline& deadline);

    bool all_resolved() const { return unresolved_ == 0; }
    const Clause& conflict() const { return conflict_; }
    bool in_conflict() const { return has_conflict_; }
    const Assignment& assignment() const { return assignment_; }
    SolverStats& stats() { return stats_; }
    Model model() const;

    /// Adds a clause mid-search, evaluating it against the current assignment.
    void add_clause(const Clause& c);

private:
    static std::size_t code(Literal l) {
        return 2 * static_cast<std::size_t>(l.var()) + (l.positive() ? 0 : 1);
    }

    std::uint32_t store(const Clause& c);
    void assign(Literal l, bool decision, bool flipped = false);
    void undo();
    void flag_conflict(std::uint32_t cid);
    void raise_theory_conflict(const Clause& c);

    EngineOptions options_;
    TheoryHook* theory_;
    Assignment assignment_;
    SolverStats stats_;

    std::vector<Literal> lits_;
    std::vector<std::uint32_t> begin_;  // clause i spans [begin_[i], begin_[i+1])
    std::vector<std::vector<std::uint32_t>> occurs_;  // indexed by code(literal)
    std::vector<std::uint32_t> true_count_;
    std::vector<std::uint32_t> false_count_;
    std::vector<std::uint32_t> pos_open_;
    std::vector<std::uint32_t> neg_open_;
    std::size_t unresolved_ = 0;
    bool empty_clause_ = false;

    std::vector<std::uint32_t> pending_;
    std::size_t pending_head_ = 0;
    std::vector<std::uint32_t> recheck_;
    std::vector<Literal> implied_;
    bool has_conflict_ = false;
    Clause conflict_;
    std::uint64_t next_deadline_check_ = 0;
};

}  // namespace sudoku::detail
