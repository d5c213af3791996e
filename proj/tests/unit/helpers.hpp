#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <vector>

#include "sudoku/cnf.hpp"
#include "sudoku/grid.hpp"
#include "sudoku/rng.hpp"

namespace testing {

using sudoku::Grid;

inline Grid grid_of(const std::vector<std::vector<int>>& rows) { return Grid::validate(rows); }

inline Grid solved_4x4() {
    return grid_of({{1, 2, 3, 4}, {3, 4, 1, 2}, {2, 1, 4, 3}, {4, 3, 2, 1}});
}

inline Grid solved_9x9() {
    return grid_of({{5, 3, 4, 6, 7, 8, 9, 1, 2},
                    {6, 7, 2, 1, 9, 5, 3, 4, 8},
                    {1, 9, 8, 3, 4, 2, 5, 6, 7},
                    {8, 5, 9, 7, 6, 1, 4, 2, 3},
                    {4, 2, 6, 8, 5, 3, 7, 9, 1},
                    {7, 1, 3, 9, 2, 4, 8, 5, 6},
                    {9, 6, 1, 5, 3, 7, 2, 8, 4},
                    {2, 8, 7, 4, 1, 9, 6, 3, 5},
                    {3, 4, 5, 2, 8, 6, 1, 7, 9}});
}

/// The classic 30-given puzzle whose unique completion is solved_9x9().
inline Grid classic_9x9() {
    return grid_of({{5, 3, 0, 0, 7, 0, 0, 0, 0},
                    {6, 0, 0, 1, 9, 5, 0, 0, 0},
                    {0, 9, 8, 0, 0, 0, 0, 6, 0},
                    {8, 0, 0, 0, 6, 0, 0, 0, 3},
                    {4, 0, 0, 8, 0, 3, 0, 0, 1},
                    {7, 0, 0, 0, 2, 0, 0, 0, 6},
                    {0, 6, 0, 0, 0, 0, 2, 8, 0},
                    {0, 0, 0, 4, 1, 9, 0, 0, 5},
                    {0, 0, 0, 0, 8, 0, 0, 7, 9}});
}

/// Every complete valid 4x4 grid (288 of them), by plain enumeration with no
/// shared code from the library's solvers.
inline const std::vector<Grid>& all_4x4_solutions() {
    static const std::vector<Grid> all = [] {
        std::vector<Grid> out;
        std::vector<int> cells(16, 0);
        std::function<void(int)> rec = [&](int i) {
            if (i == 16) {
                Grid g(4);
                for (int k = 0; k < 16; ++k) g.set(k / 4, k % 4, cells[k]);
                out.push_back(g);
                return;
            }
            const int r = i / 4, c = i % 4;
            for (int v = 1; v <= 4; ++v) {
                bool ok = true;
                for (int k = 0; k < i && ok; ++k) {
                    const int r2 = k / 4, c2 = k % 4;
                    const bool peer = r2 == r || c2 == c || (r2 / 2 == r / 2 && c2 / 2 == c / 2);
                    if (peer && cells[k] == v) ok = false;
                }
                if (!ok) continue;
                cells[i] = v;
                rec(i + 1);
                cells[i] = 0;
            }
        };
        rec(0);
        return out;
    }();
    return all;
}

/// Completions of a 4x4 puzzle counted against the enumerated list.
inline int brute_count_4x4(const Grid& puzzle) {
    int count = 0;
    for (const auto& s : all_4x4_solutions()) {
        bool ok = true;
        for (int i = 0; i < 16 && ok; ++i) {
            if (puzzle.at_index(i) != 0 && puzzle.at_index(i) != s.at_index(i)) ok = false;
        }
        count += ok;
    }
    return count;
}

/// Keeps each cell of `solution` with probability keep_percent / 100.
inline Grid random_subset(const Grid& solution, int keep_percent, sudoku::Rng& rng) {
    Grid g(solution.size());
    for (int i = 0; i < solution.cell_count(); ++i) {
        if (rng.uniform(0, 99) < keep_percent) {
            g.set(i / solution.size(), i % solution.size(), solution.at_index(i));
        }
    }
    return g;
}

/// Relabels symbols, permutes bands/stacks and rows/cols within them.
inline Grid shuffle_solution(const Grid& g, sudoku::Rng& rng) {
    const int n = g.size();
    const int b = g.block();
    std::vector<int> sym(n);
    for (int i = 0; i < n; ++i) sym[i] = i + 1;
    rng.shuffle(std::span<int>(sym));
    auto axis = [&] {
        std::vector<int> bands(b), order;
        for (int i = 0; i < b; ++i) bands[i] = i;
        rng.shuffle(std::span<int>(bands));
        for (int band : bands) {
            std::vector<int> inner(b);
            for (int i = 0; i < b; ++i) inner[i] = band * b + i;
            rng.shuffle(std::span<int>(inner));
            order.insert(order.end(), inner.begin(), inner.end());
        }
        return order;
    };
    const auto rows = axis();
    const auto cols = axis();
    Grid out(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) out.set(r, c, sym[g.at(rows[r], cols[c]) - 1]);
    return out;
}

/// Truth-table satisfiability for small formulas.
inline bool brute_sat(const sudoku::CnfFormula& f) {
    const int vars = f.var_count;
    for (std::uint64_t bits = 0; bits < (1ull << vars); ++bits) {
        bool all = true;
        for (const auto& c : f.clauses) {
            bool any = false;
            for (auto l : c) {
                const bool v = (bits >> (l.var() - 1)) & 1;
                if (v == l.positive()) {
                    any = true;
                    break;
                }
            }
            if (!any) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

inline sudoku::CnfFormula random_cnf(sudoku::Rng& rng, int max_vars = 20, int max_clauses = 60) {
    sudoku::CnfFormula f;
    f.var_count = static_cast<int>(rng.uniform(1, max_vars));
    const int m = static_cast<int>(rng.uniform(1, max_clauses));
    for (int i = 0; i < m; ++i) {
        const int width = static_cast<int>(rng.uniform(1, std::min(3, f.var_count)));
        sudoku::Clause c;
        while (static_cast<int>(c.size()) < width) {
            const int v = static_cast<int>(rng.uniform(1, f.var_count));
            bool dup = false;
            for (auto l : c) dup = dup || l.var() == v;
            if (dup) continue;
            c.emplace_back(rng.uniform(0, 1) ? v : -v);
        }
        f.clauses.push_back(std::move(c));
    }
    return f;
}

// Independent construction of the pairwise encoding as a multiset of sorted
// clauses, built from scratch with its own index arithmetic. Two cells that
// share both a row (or column) and a block give the same pair clause twice;
// the closed-form count includes both copies.
inline std::multiset<std::vector<int>> reference_clauses(const sudoku::Grid& g) {
    const int n = g.size();
    const int b = sudoku::block_edge(n);
    auto var = [n](int r, int c, int v) { return (r * n + c) * n + v; };
    std::multiset<std::vector<int>> out;
    auto amo = [&](const std::vector<int>& lits) {
        for (std::size_t i = 0; i < lits.size(); ++i)
            for (std::size_t j = i + 1; j < lits.size(); ++j) {
                std::vector<int> c{-lits[i], -lits[j]};
                std::sort(c.begin(), c.end());
                out.insert(c);
            }
    };
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            std::vector<int> lits;
            for (int v = 1; v <= n; ++v) lits.push_back(var(r, c, v));
            out.insert(lits);
            amo(lits);
        }
    for (int v = 1; v <= n; ++v) {
        for (int r = 0; r < n; ++r) {
            std::vector<int> lits;
            for (int c = 0; c < n; ++c) lits.push_back(var(r, c, v));
            amo(lits);
        }
        for (int c = 0; c < n; ++c) {
            std::vector<int> lits;
            for (int r = 0; r < n; ++r) lits.push_back(var(r, c, v));
            amo(lits);
        }
        for (int br = 0; br < b; ++br)
            for (int bc = 0; bc < b; ++bc) {
                std::vector<int> lits;
                for (int i = 0; i < b; ++i)
                    for (int j = 0; j < b; ++j) lits.push_back(var(br * b + i, bc * b + j, v));
                amo(lits);
            }
    }
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (g.at(r, c) != 0) out.insert({var(r, c, g.at(r, c))});
    return out;
}

inline std::multiset<std::vector<int>> as_set(const sudoku::CnfFormula& f) {
    std::multiset<std::vector<int>> out;
    for (const auto& c : f.clauses) {
        std::vector<int> lits;
        for (auto l : c) lits.push_back(l.value);
        std::sort(lits.begin(), lits.end());
        out.insert(lits);
    }
    return out;
}

}  // namespace testing
