#include "sudoku/grid.hpp"

#include <algorithm>
#include <sstream>

namespace sudoku {

int block_edge(int n) {
    for (int b = 2; b * b <= n; ++b) {
        if (b * b == n) return b;
    }
    return 0;
}

Grid::Grid(int n) : n_(n), b_(block_edge(n)) {
    if (b_ == 0 || n > kMaxSize) {
        throw ShapeError("grid size " + std::to_string(n) +
                         " is not a supported perfect square");
    }
    cells_.assign(static_cast<std::size_t>(n) * n, 0);
}

Grid Grid::validate(const std::vector<std::vector<int>>& raw) {
    const auto n = static_cast<int>(raw.size());
    if (n == 0) throw ShapeError("grid has no rows");
    for (std::size_t r = 0; r < raw.size(); ++r) {
        if (static_cast<int>(raw[r].size()) != n) {
            throw ShapeError("row " + std::to_string(r) + " has " +
                             std::to_string(raw[r].size()) + " columns, expected " +
                             std::to_string(n));
        }
    }
    Grid g(n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            const int v = raw[r][c];
            if (v < 0 || v > n) {
                throw ValueError("cell (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") = " + std::to_string(v) + " outside [0, " +
                                 std::to_string(n) + "]");
            }
            g.cells_[g.index(r, c)] = v;
        }
    }
    return g;
}

Grid validate(const std::vector<std::vector<int>>& raw) { return Grid::validate(raw); }

void Grid::set(int row, int col, int value) {
    if (!in_range({row, col})) throw RangeError("cell index out of range");
    if (value < 0 || value > n_) throw ValueError("cell value out of range");
    cells_[index(row, col)] = value;
}

std::vector<std::vector<int>> Grid::rows() const {
    std::vector<std::vector<int>> out(n_);
    for (int r = 0; r < n_; ++r) {
        out[r].assign(cells_.begin() + r * n_, cells_.begin() + (r + 1) * n_);
    }
    return out;
}

int Grid::givens() const {
    return static_cast<int>(std::count_if(cells_.begin(), cells_.end(),
                                          [](int v) { return v != 0; }));
}

int Grid::min_rowcol_givens() const {
    int best = n_;
    for (int i = 0; i < n_; ++i) {
        int row = 0;
        int col = 0;
        for (int j = 0; j < n_; ++j) {
            row += at(i, j) != 0;
            col += at(j, i) != 0;
        }
        best = std::min({best, row, col});
    }
    return best;
}

namespace {

// Walks every row, column and block; `seen` tracks values within one unit.
template <typename OnUnit>
bool all_units(const Grid& g, OnUnit&& check) {
    const int n = g.size();
    const int b = g.block();
    std::vector<CellRef> unit(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) unit[j] = {i, j};
        if (!check(unit)) return false;
        for (int j = 0; j < n; ++j) unit[j] = {j, i};
        if (!check(unit)) return false;
        const int r0 = (i / b) * b;
        const int c0 = (i % b) * b;
        for (int j = 0; j < n; ++j) unit[j] = {r0 + j / b, c0 + j % b};
        if (!check(unit)) return false;
    }
    return true;
}

}  // namespace

bool is_complete_valid_solution(const Grid& g) {
    const int n = g.size();
    std::vector<char> seen(n + 1);
    return all_units(g, [&](const std::vector<CellRef>& unit) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto& c : unit) {
            const int v = g.at(c);
            if (v == 0 || seen[v]) return false;
            seen[v] = 1;
        }
        return true;
    });
}

bool givens_consistent(const Grid& g) {
    const int n = g.size();
    std::vector<char> seen(n + 1);
    return all_units(g, [&](const std::vector<CellRef>& unit) {
        std::fill(seen.begin(), seen.end(), 0);
        for (const auto& c : unit) {
            const int v = g.at(c);
            if (v == 0) continue;
            if (seen[v]) return false;
            seen[v] = 1;
        }
        return true;
    });
}

bool respects_givens(const Grid& solution, const Grid& puzzle) {
    if (solution.size() != puzzle.size()) {
        throw SizeMismatch("solution is " + std::to_string(solution.size()) +
                           "x" + std::to_string(solution.size()) + ", puzzle is " +
                           std::to_string(puzzle.size()) + "x" +
                           std::to_string(puzzle.size()));
    }
    const auto s = solution.cells();
    const auto p = puzzle.cells();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] != 0 && p[i] != s[i]) return false;
    }
    return true;
}

std::string to_text(const Grid& g) {
    std::ostringstream out;
    const int width = g.size() >= 10 ? 2 : 1;
    for (int r = 0; r < g.size(); ++r) {
        for (int c = 0; c < g.size(); ++c) {
            if (c) out << ' ';
            const auto v = std::to_string(g.at(r, c));
            out << std::string(width - v.size(), ' ') << v;
        }
        out << '\n';
    }
    return out.str();
}

std::uint64_t grid_hash(const Grid& g) {
    std::uint64_t h = 14695981039346656037ull;
    for (int v : g.cells()) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sudoku
