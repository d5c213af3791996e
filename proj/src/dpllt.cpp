#include "sudoku/dpllt.hpp"

#include <algorithm>
#include <stdexcept>

#include "dpll_engine.hpp"

namespace sudoku {

TheoryState::TheoryState(int n) : n_(n), b_(block_edge(n)) {
    if (b_ == 0) throw ShapeError("theory needs a perfect-square grid size");
    const auto slots = static_cast<std::size_t>(n) * (n + 1);
    rows_.assign(slots, -1);
    cols_.assign(slots, -1);
    blocks_.assign(slots, -1);
}

std::optional<Clause> TheoryState::propagate(Literal lit) {
    if (!lit.positive()) return std::nullopt;
    const auto [cell, v] = decode_var(lit.var(), n_);
    const int here = cell.row * n_ + cell.col;
    const int blk = (cell.row / b_) * b_ + cell.col / b_;
    for (int other : {rows_[slot(cell.row, v)], cols_[slot(cell.col, v)], blocks_[slot(blk, v)]}) {
        if (other >= 0 && other != here) {
            const int existing = var_index({other / n_, other % n_}, v, n_);
            return Clause{Literal(-existing), Literal(-lit.var())};
        }
    }
    rows_[slot(cell.row, v)] = here;
    cols_[slot(cell.col, v)] = here;
    blocks_[slot(blk, v)] = here;
    return std::nullopt;
}

void TheoryState::retract(Literal lit) {
    if (!lit.positive()) return;
    const auto [cell, v] = decode_var(lit.var(), n_);
    const int here = cell.row * n_ + cell.col;
    if (rows_[slot(cell.row, v)] != here) return;
    const int blk = (cell.row / b_) * b_ + cell.col / b_;
    rows_[slot(cell.row, v)] = -1;
    cols_[slot(cell.col, v)] = -1;
    blocks_[slot(blk, v)] = -1;
}

bool TheoryState::mirrors(const Assignment& a) const {
    TheoryState expected(n_);
    for (const auto& e : a.trail()) {
        if (!e.value) continue;
        if (expected.propagate(Literal(e.var))) return false;
    }
    return expected.rows_ == rows_ && expected.cols_ == cols_ && expected.blocks_ == blocks_;
}

std::optional<Clause> theory_propagate(TheoryState& state, Literal newly_assigned) {
    return state.propagate(newly_assigned);
}

bool LearnedClauseStore::learn(const Clause& c) {
    std::vector<int> key;
    key.reserve(c.size());
    for (auto l : c) key.push_back(l.value);
    std::sort(key.begin(), key.end());
    key.erase(std::unique(key.begin(), key.end()), key.end());
    if (!keys_.insert(std::move(key)).second) return false;
    clauses_.push_back(c);
    return true;
}

namespace {

class SudokuTheory final : public detail::TheoryHook {
public:
    SudokuTheory(int n, LearnedClauseStore& store, const DplltOptions& options)
        : n_(n), b_(block_edge(n)), state_(n), store_(store), options_(options) {}

    std::optional<Clause> on_true(Literal l) override {
        auto conflict = state_.propagate(l);
        if (!conflict) fresh_.push_back(l);
        return conflict;
    }

    void on_undo(Literal l) override {
        state_.retract(l);
        std::erase(fresh_, l);
    }

    // A value placed in a cell is ruled out for every row, column and block peer.
    void implied(const Assignment& a, std::vector<Literal>& out) override {
        for (auto l : fresh_) {
            const auto [cell, v] = decode_var(l.var(), n_);
            auto exclude = [&](int r, int c) {
                if (r == cell.row && c == cell.col) return;
                const int var = var_index({r, c}, v, n_);
                if (!a.assigned(var)) out.push_back(Literal(-var));
            };
            for (int i = 0; i < n_; ++i) {
                exclude(cell.row, i);
                exclude(i, cell.col);
            }
            const int r0 = cell.row / b_ * b_;
            const int c0 = cell.col / b_ * b_;
            for (int i = 0; i < b_; ++i)
                for (int j = 0; j < b_; ++j) exclude(r0 + i, c0 + j);
        }
        fresh_.clear();
    }

    bool learn(const Clause& c, const Assignment& at) override {
        if (!store_.learn(c)) return false;
        if (options_.on_learn) options_.on_learn(c, at);
        return true;
    }

    void checkpoint(const Assignment& a) override {
        if (options_.verify_invariants && !state_.mirrors(a)) {
            throw std::logic_error("theory occupancy does not mirror the assignment");
        }
    }

private:
    int n_;
    int b_;
    TheoryState state_;
    std::vector<Literal> fresh_;  // accepted since the last implied() call
    LearnedClauseStore& store_;
    const DplltOptions& options_;
};

}  // namespace

SolveOutcome DplltSolver::solve(const CnfFormula& f, const Deadline& deadline) {
    if (f.grid_size == 0 || f.var_count != f.grid_size * f.grid_size * f.grid_size) {
        throw std::invalid_argument("DPLL(T) needs a formula produced by encode()");
    }
    learned_ = {};
    SudokuTheory theory(f.grid_size, learned_, options_);
    // Positive pure literals would bypass the theory, so only false ones are taken.
    detail::DpllEngine engine(f, {.positive_pure = false}, &theory);
    return engine.run(deadline);
}

SolveOutcome solve_t(const CnfFormula& f, const Deadline& deadline) {
    DplltSolver solver;
    return solver.solve(f, deadline);
}

}  // namespace sudoku
