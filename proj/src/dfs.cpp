#include "sudoku/dfs.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace sudoku {

namespace {

std::uint64_t bit(int v) { return 1ull << v; }

// Tarjan's SCC over at most 64 nodes with bitmask adjacency. No allocation:
// it runs once per unit filter.
class Scc {
public:
    Scc(const std::uint64_t* adj, int size) : adj_(adj), size_(size) {
        for (int v = 0; v < size_; ++v) index_[v] = -1;
    }

    // Component id per node.
    const int* run() {
        for (int v = 0; v < size_; ++v) {
            if (index_[v] < 0) visit(v);
        }
        return comp_;
    }

private:
    void visit(int v) {
        index_[v] = low_[v] = counter_++;
        stack_[depth_++] = v;
        on_stack_ |= bit(v);
        for (std::uint64_t m = adj_[v]; m; m &= m - 1) {
            const int w = std::countr_zero(m);
            if (index_[w] < 0) {
                visit(w);
                low_[v] = std::min(low_[v], low_[w]);
            } else if (on_stack_ & bit(w)) {
                low_[v] = std::min(low_[v], index_[w]);
            }
        }
        if (low_[v] == index_[v]) {
            int w;
            do {
                w = stack_[--depth_];
                on_stack_ &= ~bit(w);
                comp_[w] = components_;
            } while (w != v);
            ++components_;
        }
    }

    const std::uint64_t* adj_;
    int size_;
    int index_[64], low_[64], comp_[64], stack_[64];
    int depth_ = 0;
    std::uint64_t on_stack_ = 0;
    int counter_ = 0;
    int components_ = 0;
};

}  // namespace

DfsSolver::DfsSolver(const Grid& puzzle)
    : n_(puzzle.size()), full_(((1ull << n_) - 1) << 1) {
    const int total = n_ * n_;
    units_.resize(3 * static_cast<std::size_t>(n_));
    for (auto& u : units_) {
        u.value_of.assign(n_, 0);
        u.pos_of.assign(n_ + 1, -1);
    }
    units_of_.resize(total);
    initial_.resize(total);
    for (int i = 0; i < total; ++i) {
        const int r = i / n_;
        const int c = i % n_;
        units_of_[i] = {r, n_ + c, 2 * n_ + puzzle.block_of(r, c)};
        for (int u : units_of_[i]) units_[u].cells.push_back(i);
        const int v = puzzle.at_index(i);
        initial_[i] = v == 0 ? full_ : bit(v);
    }
    dirty_.assign(units_.size(), 0);
    domain_ = initial_;
}

void DfsSolver::narrow(int cell, std::uint64_t mask) {
    const std::uint64_t next = domain_[cell] & mask;
    if (next == domain_[cell]) return;
    trail_.emplace_back(cell, domain_[cell]);
    domain_[cell] = next;
    for (int u : units_of_[cell]) {
        if (!dirty_[u]) {
            dirty_[u] = 1;
            queue_.push_back(u);
        }
    }
}

void DfsSolver::undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
        domain_[trail_.back().first] = trail_.back().second;
        trail_.pop_back();
    }
}

bool DfsSolver::augment(Unit& u, int pos, std::uint64_t& seen) {
    for (std::uint64_t m = domain_[u.cells[pos]] & ~seen; m; m &= m - 1) {
        const int v = std::countr_zero(m);
        seen |= bit(v);
        const int holder = u.pos_of[v];
        if (holder < 0 || augment(u, holder, seen)) {
            u.value_of[pos] = v;
            u.pos_of[v] = pos;
            return true;
        }
    }
    return false;
}

// All-different filtering for one unit. The matching persists between calls
// and is only repaired where a domain lost its matched value.
bool DfsSolver::filter_unit(Unit& u) {
    bool all_fixed = true;
    for (int p = 0; p < n_; ++p) {
        const std::uint64_t d = domain_[u.cells[p]];
        if (d == 0) return false;
        all_fixed = all_fixed && std::has_single_bit(d);
        const int v = u.value_of[p];
        if (v != 0 && !(d & bit(v))) {
            u.pos_of[v] = -1;
            u.value_of[p] = 0;
        }
    }
    for (int p = 0; p < n_; ++p) {
        if (u.value_of[p] != 0) continue;
        std::uint64_t seen = 0;
        if (!augment(u, p, seen)) return false;
    }
    if (all_fixed) return true;

    // With a perfect matching, an edge (p, v) survives iff v is matched or p
    // and the holder of v share a strongly connected component of the
    // alternating graph p -> holder(v). Fixed positions are singleton
    // components, so only the open ones enter the graph.
    int open[64];
    int local[64];
    int m = 0;
    std::uint64_t fixed = 0;
    for (int p = 0; p < n_; ++p) {
        const std::uint64_t d = domain_[u.cells[p]];
        if (std::has_single_bit(d)) {
            fixed |= d;
        } else {
            local[p] = m;
            open[m++] = p;
        }
    }
    // Keeps every matched value, so the matching stays perfect.
    for (int i = 0; i < m; ++i) narrow(u.cells[open[i]], ~fixed);
    std::uint64_t adj[64];
    for (int i = 0; i < m; ++i) {
        const int p = open[i];
        std::uint64_t a = 0;
        for (std::uint64_t d = domain_[u.cells[p]] & ~bit(u.value_of[p]); d; d &= d - 1) {
            a |= bit(local[u.pos_of[std::countr_zero(d)]]);
        }
        adj[i] = a;
    }
    Scc scc(adj, m);
    const int* comp = scc.run();
    std::uint64_t allowed[64] = {};
    for (int i = 0; i < m; ++i) allowed[comp[i]] |= bit(u.value_of[open[i]]);
    for (int i = 0; i < m; ++i) narrow(u.cells[open[i]], allowed[comp[i]]);
    return true;
}

bool DfsSolver::propagate() {
    for (std::size_t head = 0; head < queue_.size(); ++head) {
        const int u = queue_[head];
        // Stays marked while filtering: one pass leaves the unit consistent.
        if (!filter_unit(units_[u])) {
            for (int w : queue_) dirty_[w] = 0;
            queue_.clear();
            return false;
        }
        dirty_[u] = 0;
    }
    queue_.clear();
    return true;
}

// Tries both values of every two-candidate cell; a value whose propagation
// fails is removed. Repeats until nothing changes. False if the node fails.
bool DfsSolver::probe_pairs() {
    const int total = n_ * n_;
    for (bool changed = true; changed;) {
        changed = false;
        for (int cell = 0; cell < total; ++cell) {
            const std::uint64_t d = domain_[cell];
            if (std::popcount(d) != 2) continue;
            for (std::uint64_t m = d; m; m &= m - 1) {
                const std::uint64_t v = m & -m;
                const std::size_t mark = trail_.size();
                narrow(cell, v);
                const bool ok = propagate();
                undo_to(mark);
                if (!ok) {
                    narrow(cell, ~v);
                    if (!propagate()) return false;
                    changed = true;
                    break;
                }
            }
        }
    }
    return true;
}

DfsSolver::UnitChoice DfsSolver::narrowest_unit_value(int below) const {
    UnitChoice best{-1, 0, below};
    // After filtering every missing value has at least two places.
    if (below <= 2) return best;
    for (std::size_t u = 0; u < units_.size(); ++u) {
        // at_least[k]: values with k or more open places, up to the bound.
        std::uint64_t at_least[65];
        at_least[0] = ~0ull;
        for (int k = 1; k < best.positions + 1; ++k) at_least[k] = 0;
        for (int cell : units_[u].cells) {
            const std::uint64_t d = domain_[cell];
            if (std::has_single_bit(d)) continue;
            for (int k = best.positions; k >= 1; --k) at_least[k] |= at_least[k - 1] & d;
        }
        for (int k = 2; k < best.positions; ++k) {
            const std::uint64_t exact = at_least[k] & ~at_least[k + 1];
            if (exact) {
                best = {static_cast<int>(u), std::countr_zero(exact), k};
                break;
            }
        }
    }
    return best;
}

// Returns true once the search should stop (limit reached or timed out).
bool DfsSolver::search(int limit, const Deadline& deadline, Rng* rng) {
    ++nodes_;
    if (deadline.expired() || (max_nodes_ != 0 && nodes_ > max_nodes_)) {
        timed_out_ = true;
        return true;
    }
    if (!propagate()) return false;
    if (!probe_pairs()) return false;

    const int total = n_ * n_;
    int best = -1;
    int best_count = n_ + 1;
    for (int cell = 0; cell < total; ++cell) {
        const int k = std::popcount(domain_[cell]);
        if (k >= 2 && k < best_count) {
            best = cell;
            best_count = k;
            if (k == 2) break;
        }
    }
    if (best < 0) {
        if (found_++ == 0) {
            std::vector<int> values(total);
            for (int i = 0; i < total; ++i) values[i] = std::countr_zero(domain_[i]);
            first_solution_ = std::move(values);
        }
        return found_ >= limit;
    }

    int branch[64];
    int k = 0;
    const UnitChoice u = narrowest_unit_value(best_count);
    if (u.unit >= 0) {
        for (int cell : units_[u.unit].cells) {
            if (!std::has_single_bit(domain_[cell]) && (domain_[cell] & bit(u.value))) branch[k++] = cell;
        }
    } else {
        if (observer_) {
            std::vector<int> values(total);
            for (int i = 0; i < total; ++i) {
                values[i] = std::has_single_bit(domain_[i]) ? std::countr_zero(domain_[i]) : 0;
            }
            observer_(values, best);
        }
        for (std::uint64_t m = domain_[best]; m; m &= m - 1) branch[k++] = std::countr_zero(m);
    }
    if (rng) rng->shuffle(std::span<int>(branch, k));

    for (int i = 0; i < k; ++i) {
        const std::size_t mark = trail_.size();
        if (u.unit >= 0) {
            narrow(branch[i], bit(u.value));
        } else {
            narrow(best, bit(branch[i]));
        }
        const bool stop = search(limit, deadline, rng);
        undo_to(mark);
        if (stop) return true;
    }
    return false;
}

void DfsSolver::reset_run() {
    nodes_ = 0;
    found_ = 0;
    timed_out_ = false;
    first_solution_.reset();
    trail_.clear();
    domain_ = initial_;
    queue_.clear();
    for (std::size_t u = 0; u < units_.size(); ++u) {
        dirty_[u] = 1;
        queue_.push_back(static_cast<int>(u));
    }
}

DfsResult DfsSolver::solve(const Deadline& deadline, Rng* rng) {
    reset_run();
    max_nodes_ = 0;
    DfsResult r;
    if (deadline.expired()) {
        r.status = DfsStatus::Timeout;
        return r;
    }
    search(1, deadline, rng);
    r.nodes = nodes_;
    if (timed_out_) {
        r.status = DfsStatus::Timeout;
    } else if (first_solution_) {
        r.status = DfsStatus::Solved;
        Grid g(n_);
        for (int i = 0; i < n_ * n_; ++i) g.set(i / n_, i % n_, (*first_solution_)[i]);
        r.solution = std::move(g);
    }
    return r;
}

int DfsSolver::count(int limit, const Deadline& deadline, std::uint64_t max_nodes) {
    if (limit < 1) throw std::invalid_argument("count limit must be at least 1");
    reset_run();
    max_nodes_ = max_nodes;
    if (deadline.expired()) throw TimeoutError();
    search(limit, deadline, nullptr);
    if (timed_out_) throw TimeoutError();
    return found_;
}

DfsResult solve_dfs(const Grid& g, const Deadline& deadline, Rng* rng) {
    DfsSolver solver(g);
    return solver.solve(deadline, rng);
}

int count_solutions(const Grid& g, int limit, const Deadline& deadline, std::uint64_t* nodes,
                    std::uint64_t max_nodes) {
    DfsSolver solver(g);
    try {
        const int count = solver.count(limit, deadline, max_nodes);
        if (nodes) *nodes = solver.nodes();
        return count;
    } catch (const TimeoutError&) {
        if (nodes) *nodes = solver.nodes();
        throw;
    }
}

}  // namespace sudoku
