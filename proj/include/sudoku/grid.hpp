#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sudoku {

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ValueError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class SizeMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

struct CellRef {
    int row = 0;
    int col = 0;

    friend bool operator==(const CellRef&, const CellRef&) = default;
};

/// Largest supported grid edge (block edge 7). Candidate sets are 64-bit masks.
inline constexpr int kMaxSize = 49;

/// An n x n Sudoku grid (n = b*b, b >= 2). Cell value 0 marks an empty cell.
///
/// A Grid can only be obtained through validate() or the empty-grid
/// constructor, so every instance satisfies the shape and value bounds.
class Grid {
public:
    /// Empty grid of edge n. Throws ShapeError unless n is a supported perfect square.
    explicit Grid(int n);

    /// Validates an arbitrary row-major matrix candidate.
    static Grid validate(const std::vector<std::vector<int>>& raw);

    int size() const { return n_; }
    int block() const { return b_; }
    int cell_count() const { return n_ * n_; }

    int at(int row, int col) const { return cells_[index(row, col)]; }
    int at(CellRef c) const { return at(c.row, c.col); }
    int at_index(int i) const { return cells_[i]; }

    /// Sets one cell; value must lie in [0, n].
    void set(int row, int col, int value);
    void set(CellRef c, int value) { set(c.row, c.col, value); }
    void clear(CellRef c) { set(c.row, c.col, 0); }

    bool in_range(CellRef c) const {
        return c.row >= 0 && c.row < n_ && c.col >= 0 && c.col < n_;
    }
    int index(int row, int col) const { return row * n_ + col; }
    int block_of(int row, int col) const { return (row / b_) * b_ + col / b_; }

    std::span<const int> cells() const { return cells_; }
    std::vector<std::vector<int>> rows() const;

    int givens() const;
    /// Smallest number of givens over all rows and all columns.
    int min_rowcol_givens() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int n_;
    int b_;
    std::vector<int> cells_;
};

/// Returns the block edge b with b*b == n, or 0 if n is not a perfect square >= 4.
int block_edge(int n);

Grid validate(const std::vector<std::vector<int>>& raw);

/// No empty cell, and every row, column and block holds 1..n exactly once.
bool is_complete_valid_solution(const Grid& g);

/// Every nonzero cell of puzzle equals the corresponding cell of solution.
bool respects_givens(const Grid& solution, const Grid& puzzle);

/// True when no row, column or block repeats a nonzero value.
bool givens_consistent(const Grid& g);

/// Rows of space-separated values, one row per line.
std::string to_text(const Grid& g);

/// 64-bit FNV-1a over the cell values.
std::uint64_t grid_hash(const Grid& g);

}  // namespace sudoku
