#include "sudoku/dpll.hpp"

#include <algorithm>
#include <cassert>

#include "dpll_engine.hpp"

namespace sudoku {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Sat: return "sat";
        case SolveStatus::Unsat: return "unsat";
        case SolveStatus::Timeout: return "timeout";
    }
    return "unknown";
}

void Assignment::push(Literal l, bool decision, bool flipped) {
    assert(!assigned(l.var()));
    values_[l.var()] = l.positive() ? 1 : 0;
    trail_.push_back({l.var(), l.positive(), decision, flipped});
}

TrailEntry Assignment::pop() {
    const TrailEntry e = trail_.back();
    trail_.pop_back();
    values_[e.var] = kUnassigned;
    return e;
}

namespace detail {

namespace {
constexpr std::uint64_t kDeadlineStride = 4096;
}

DpllEngine::DpllEngine(const CnfFormula& f, EngineOptions options, TheoryHook* theory)
    : options_(options),
      theory_(theory),
      assignment_(f.var_count),
      occurs_(2 * (static_cast<std::size_t>(f.var_count) + 1)),
      pos_open_(f.var_count + 1),
      neg_open_(f.var_count + 1) {
    std::size_t total = 0;
    for (const auto& c : f.clauses) total += c.size();
    lits_.reserve(total);
    begin_.reserve(f.clauses.size() + 1);
    begin_.push_back(0);
    true_count_.reserve(f.clauses.size());
    false_count_.reserve(f.clauses.size());
    for (const auto& c : f.clauses) store(c);
}

std::uint32_t DpllEngine::store(const Clause& raw) {
    Clause c;
    c.reserve(raw.size());
    for (auto l : raw) {
        if (std::find(c.begin(), c.end(), l) == c.end()) c.push_back(l);
    }
    const auto cid = static_cast<std::uint32_t>(true_count_.size());
    std::uint32_t t = 0;
    std::uint32_t fl = 0;
    for (auto l : c) {
        lits_.push_back(l);
        occurs_[code(l)].push_back(cid);
        const int v = assignment_.literal_value(l);
        t += v == 1;
        fl += v == 0;
    }
    begin_.push_back(static_cast<std::uint32_t>(lits_.size()));
    true_count_.push_back(t);
    false_count_.push_back(fl);
    if (c.empty()) empty_clause_ = true;
    if (t == 0) {
        ++unresolved_;
        for (auto l : c) ++(l.positive() ? pos_open_ : neg_open_)[l.var()];
        if (fl == c.size()) {
            flag_conflict(cid);
        } else if (fl + 1 == c.size()) {
            pending_.push_back(cid);
        }
    }
    return cid;
}

void DpllEngine::add_clause(const Clause& c) { store(c); }

void DpllEngine::flag_conflict(std::uint32_t cid) {
    if (has_conflict_) return;
    has_conflict_ = true;
    conflict_.assign(lits_.begin() + begin_[cid], lits_.begin() + begin_[cid + 1]);
}

void DpllEngine::raise_theory_conflict(const Clause& c) {
    ++stats_.propagations;
    if (theory_->learn(c, assignment_)) {
        store(c);
    }
    if (!has_conflict_) {
        has_conflict_ = true;
        conflict_ = c;
    }
}

void DpllEngine::assign(Literal l, bool decision, bool flipped) {
    assignment_.push(l, decision, flipped);
    for (auto cid : occurs_[code(l)]) {
        if (true_count_[cid]++ == 0) {
            --unresolved_;
            for (auto i = begin_[cid]; i < begin_[cid + 1]; ++i) {
                const auto m = lits_[i];
                --(m.positive() ? pos_open_ : neg_open_)[m.var()];
            }
        }
    }
    for (auto cid : occurs_[code(-l)]) {
        const auto fl = ++false_count_[cid];
        if (true_count_[cid] != 0) continue;
        const auto size = begin_[cid + 1] - begin_[cid];
        if (fl == size) {
            flag_conflict(cid);
        } else if (fl + 1 == size) {
            pending_.push_back(cid);
        }
    }
    if (!has_conflict_ && theory_ && l.positive()) {
        if (auto c = theory_->on_true(l)) raise_theory_conflict(*c);
    }
}

void DpllEngine::undo() {
    const TrailEntry e = assignment_.pop();
    const Literal l(e.value ? e.var : -e.var);
    for (auto cid : occurs_[code(l)]) {
        if (--true_count_[cid] == 0) {
            ++unresolved_;
            for (auto i = begin_[cid]; i < begin_[cid + 1]; ++i) {
                const auto m = lits_[i];
                ++(m.positive() ? pos_open_ : neg_open_)[m.var()];
            }
        }
    }
    for (auto cid : occurs_[code(-l)]) {
        const auto fl = --false_count_[cid];
        if (true_count_[cid] == 0 && fl + 1 == begin_[cid + 1] - begin_[cid]) {
            recheck_.push_back(cid);
        }
    }
    if (theory_ && l.positive()) theory_->on_undo(l);
}

void DpllEngine::load(const Assignment& a) {
    for (const auto& e : a.trail()) {
        assign(Literal(e.value ? e.var : -e.var), e.decision, e.flipped);
    }
}

DpllEngine::Step DpllEngine::propagate(const Deadline& deadline) {
    if (has_conflict_) return Step::Conflict;
    auto timed_out = [&] { return ++next_deadline_check_ % kDeadlineStride == 0 && deadline.expired(); };
    for (;;) {
        while (pending_head_ < pending_.size()) {
            const auto cid = pending_[pending_head_++];
            if (true_count_[cid] != 0) continue;
            const auto size = begin_[cid + 1] - begin_[cid];
            if (false_count_[cid] == size) {
                flag_conflict(cid);
                break;
            }
            // Entries queued during a backtrack may have lost more false
            // literals since; only a clause with exactly one open literal forces.
            if (false_count_[cid] + 1 != size) continue;
            Literal unit;
            for (auto i = begin_[cid]; i < begin_[cid + 1]; ++i) {
                if (assignment_.literal_value(lits_[i]) == -1) {
                    unit = lits_[i];
                    break;
                }
            }
            assert(unit.value != 0);
            ++stats_.propagations;
            assign(unit, false);
            if (has_conflict_) break;
            if (timed_out()) {
                pending_.clear();
                pending_head_ = 0;
                return Step::Timeout;
            }
        }
        pending_.clear();
        pending_head_ = 0;
        if (has_conflict_ || !theory_) break;

        implied_.clear();
        theory_->implied(assignment_, implied_);
        bool assigned = false;
        for (auto l : implied_) {
            if (assignment_.literal_value(l) != -1) continue;
            ++stats_.propagations;
            assign(l, false);
            assigned = true;
            if (has_conflict_) break;
        }
        if (!assigned || has_conflict_) break;
        if (timed_out()) {
            pending_.clear();
            pending_head_ = 0;
            return Step::Timeout;
        }
    }
    pending_.clear();
    pending_head_ = 0;
    return has_conflict_ ? Step::Conflict : Step::Ok;
}

std::vector<Literal> DpllEngine::eliminate_pure() {
    std::vector<Literal> delta;
    const int vars = assignment_.var_count();
    for (int v = 1; v <= vars; ++v) {
        if (assignment_.assigned(v)) continue;
        const bool pos = pos_open_[v] != 0;
        const bool neg = neg_open_[v] != 0;
        if (pos == neg) continue;
        if (pos && !options_.positive_pure) continue;
        const Literal l(pos ? v : -v);
        ++stats_.propagations;
        assign(l, false);
        delta.push_back(l);
    }
    return delta;
}

bool DpllEngine::backtrack() {
    pending_.clear();
    pending_head_ = 0;
    has_conflict_ = false;
    conflict_.clear();
    while (assignment_.size() != 0) {
        const TrailEntry e = assignment_.trail().back();
        undo();
        if (e.decision && !e.flipped) {
            ++stats_.backtracks;
            assign(Literal(e.value ? -e.var : e.var), true, true);
            pending_.insert(pending_.end(), recheck_.begin(), recheck_.end());
            recheck_.clear();
            return true;
        }
    }
    recheck_.clear();
    return false;
}

void DpllEngine::decide(Literal l) {
    ++stats_.decisions;
    assign(l, true);
}

std::optional<int> DpllEngine::pick_branch_var() const {
    const int vars = assignment_.var_count();
    for (int v = 1; v <= vars; ++v) {
        if (!assignment_.assigned(v) && pos_open_[v] + neg_open_[v] != 0) return v;
    }
    return std::nullopt;
}

Model DpllEngine::model() const {
    Model m;
    m.values.assign(assignment_.var_count() + 1, false);
    for (const auto& e : assignment_.trail()) m.values[e.var] = e.value;
    return m;
}

SolveOutcome DpllEngine::run(const Deadline& deadline) {
    const auto start = Clock::now();
    SolveOutcome out;
    auto finish = [&](SolveStatus status) {
        out.status = status;
        if (status == SolveStatus::Sat) out.model = model();
        stats_.elapsed = Clock::now() - start;
        out.stats = stats_;
        return out;
    };

    if (deadline.expired()) return finish(SolveStatus::Timeout);
    if (empty_clause_) return finish(SolveStatus::Unsat);

    for (;;) {
        const Step step = propagate(deadline);
        if (step == Step::Timeout) return finish(SolveStatus::Timeout);
        if (step == Step::Conflict) {
            if (!backtrack()) return finish(SolveStatus::Unsat);
            if (theory_ && !has_conflict_) theory_->checkpoint(assignment_);
            if (deadline.expired()) return finish(SolveStatus::Timeout);
            continue;
        }
        if (theory_) theory_->checkpoint(assignment_);
        if (all_resolved()) return finish(SolveStatus::Sat);
        eliminate_pure();
        if (all_resolved()) return finish(SolveStatus::Sat);
        const auto var = pick_branch_var();
        if (!var) return finish(SolveStatus::Sat);
        if (deadline.expired()) return finish(SolveStatus::Timeout);
        decide(Literal(*var));
    }
}

}  // namespace detail

PropagationResult unit_propagate(const CnfFormula& f, Assignment& a, SolverStats& stats) {
    detail::DpllEngine engine(f);
    engine.load(a);
    const auto step = engine.propagate(Deadline::none());
    a = engine.assignment();
    stats.propagations += engine.stats().propagations;
    PropagationResult r;
    if (step == detail::DpllEngine::Step::Conflict) {
        r.conflict = true;
        r.clause = engine.conflict();
    }
    return r;
}

std::vector<Literal> pure_literal_eliminate(const CnfFormula& f, Assignment& a,
                                            SolverStats& stats) {
    detail::DpllEngine engine(f);
    engine.load(a);
    auto delta = engine.eliminate_pure();
    a = engine.assignment();
    stats.propagations += engine.stats().propagations;
    return delta;
}

SolveOutcome solve(const CnfFormula& f, const Deadline& deadline) {
    detail::DpllEngine engine(f);
    return engine.run(deadline);
}

}  // namespace sudoku
