#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sudoku/deadline.hpp"
#include "sudoku/grid.hpp"
#include "sudoku/rng.hpp"

namespace sudoku {

enum class DfsStatus { Solved, NoSolution, Timeout };

struct DfsResult {
    DfsStatus status = DfsStatus::NoSolution;
    std::optional<Grid> solution;
    std::uint64_t nodes = 0;
};

/// Depth-first search with minimum-remaining-values cell selection.
///
/// Every cell carries a candidate mask (bit v set for value v). At each node
/// the masks are narrowed to a fixpoint by all-different filtering on the
/// touched rows, columns and blocks: a perfect cell/value matching must exist
/// in every unit, and a value is dropped from a cell when no perfect matching
/// can pair them. Peer elimination, naked singles and hidden singles all fall
/// out of that filter. After that, every cell left with two candidates is
/// probed: each candidate is tried in turn, and one whose filtering ends in
/// a wipe-out is removed. Probing repeats until nothing changes.
///
/// The node then branches on the empty cell with the fewest candidates
/// (ties to the lowest row-major index). If some (unit, missing value) pair
/// has strictly fewer possible cells than that, it branches over those cells
/// instead; those branches are not MRV selections and skip the observer.
/// Values are tried in ascending order unless an Rng is supplied, in which
/// case each node shuffles its branches.
class DfsSolver {
public:
    explicit DfsSolver(const Grid& puzzle);

    DfsResult solve(const Deadline& deadline = {}, Rng* rng = nullptr);

    /// min(limit, number of completions). Throws TimeoutError when the
    /// deadline passes or, if max_nodes > 0, once the search expands more
    /// than max_nodes nodes.
    int count(int limit, const Deadline& deadline = {}, std::uint64_t max_nodes = 0);

    /// Node expansions performed by the last solve() or count().
    std::uint64_t nodes() const { return nodes_; }

    /// Invoked at each MRV selection with the current cell values (0 for
    /// cells with two or more candidates) and the chosen cell index.
    void set_selection_observer(std::function<void(std::span<const int>, int)> obs) {
        observer_ = std::move(obs);
    }

    /// Candidate mask of a cell in the current search state.
    std::uint64_t candidates(int cell) const { return domain_[cell]; }

private:
    struct Unit {
        std::vector<int> cells;
        std::vector<int> value_of;  // matched value per position, 0 if none
        std::vector<int> pos_of;    // matched position per value, -1 if none
    };
    struct UnitChoice {
        int unit;  // -1 if nothing beats the bound
        int value;
        int positions;
    };

    void narrow(int cell, std::uint64_t mask);
    void undo_to(std::size_t mark);
    bool propagate();
    bool probe_pairs();
    bool filter_unit(Unit& u);
    bool augment(Unit& u, int pos, std::uint64_t& seen);
    UnitChoice narrowest_unit_value(int below) const;
    bool search(int limit, const Deadline& deadline, Rng* rng);
    void reset_run();

    int n_;
    std::uint64_t full_;
    std::vector<std::uint64_t> domain_;
    std::vector<std::pair<int, std::uint64_t>> trail_;  // (cell, previous mask)
    std::vector<Unit> units_;                            // rows, then columns, then blocks
    std::vector<std::array<int, 3>> units_of_;
    std::vector<char> dirty_;
    std::vector<int> queue_;
    std::vector<std::uint64_t> initial_;

    std::uint64_t nodes_ = 0;
    std::uint64_t max_nodes_ = 0;
    int found_ = 0;
    bool timed_out_ = false;
    std::optional<std::vector<int>> first_solution_;
    std::function<void(std::span<const int>, int)> observer_;
};

DfsResult solve_dfs(const Grid& g, const Deadline& deadline = {}, Rng* rng = nullptr);

/// Bounded solution counter; stops as soon as `limit` completions are seen.
/// Throws TimeoutError on the deadline or after max_nodes expansions (0 for
/// no node cap). `nodes`, when given, receives the expansion count.
int count_solutions(const Grid& g, int limit, const Deadline& deadline = {},
                    std::uint64_t* nodes = nullptr, std::uint64_t max_nodes = 0);

}  // namespace sudoku
